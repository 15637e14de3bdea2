#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ehdist/mdp.hpp"
#include "ehdist/policies.hpp"
#include "ehdist/sim.hpp"
#include "ehdist/system.hpp"

namespace ehdist {

/// Per-run figures written next to every output as summary.json.
struct RunSummary {
  double gain = 0.0;
  int iterations = 0;
  double final_span = 0.0;
  int e_max = 0;
  int e_min = 0;
  int k_r = 0;
  int capacity = 0;
  double mu = 0.0;
  double snr = 0.0;
  std::vector<std::string> warnings;
};

RunSummary summarize(const System& system, const MdpSolution& solution);
std::string to_json(const RunSummary& summary);

/// source_state,battery_level,action,k_star,expected_cost where expected_cost
/// is the true per-slot expected distortion of the action.
void write_policy_table(std::ostream& out, const System& system, const Controller& controller);

struct MuSweepRow {
  double mu_bar = 0.0;
  double b_bar = 0.0;
  double gain = 0.0;
};

struct DistanceSweepRow {
  double distance = 0.0;
  double b_bar = 0.0;
  double gain = 0.0;
};

struct CompareRow {
  double mu_bar = 0.0;
  double gain_op = 0.0;
  double gain_gp = 0.0;
  double gain_dp = 0.0;
};

/// Optimal gain over the grid mu_bars x b_bars, sorted by (mu_bar, b_bar).
/// Points are solved concurrently.
std::vector<MuSweepRow> sweep_mu(const SystemConfig& config, const std::vector<double>& mu_bars,
                                 const std::vector<double>& b_bars);

/// Optimal gain over distances x b_bars, sorted by (distance, b_bar).
std::vector<DistanceSweepRow> sweep_distance(const SystemConfig& config,
                                             const std::vector<double>& distances,
                                             const std::vector<double>& b_bars);

/// True long-run cost of OP, GP and DP at each mu_bar.
std::vector<CompareRow> compare_policies(const SystemConfig& config, const std::vector<double>& mu_bars);

void write_csv(std::ostream& out, const std::vector<MuSweepRow>& rows);
void write_csv(std::ostream& out, const std::vector<DistanceSweepRow>& rows);
void write_csv(std::ostream& out, const std::vector<CompareRow>& rows);

/// OP, GP and DP simulated from the same seed, in that order.
struct TraceBundle {
  std::array<Controller, 3> controllers;
  std::array<SimResult, 3> runs;
  std::array<BatteryStats, 3> stats;
};

TraceBundle trace_bundle(const System& system, const SimOptions& options);

struct Check {
  std::string name;
  bool pass = true;
  bool enforced = true;  ///< report-only checks do not fail the verify command
  std::string detail;
};

struct VerifyReport {
  std::vector<Check> checks;
  bool pass() const;
};

/// Oracle and structure checks on one configuration, plus randomised oracle
/// suites seeded by `seed`.
VerifyReport verify(const System& system, std::uint64_t seed);
std::string to_json(const VerifyReport& report);

}  // namespace ehdist
