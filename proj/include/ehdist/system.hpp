#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ehdist/energy_model.hpp"
#include "ehdist/model.hpp"
#include "ehdist/rd_core.hpp"

namespace ehdist {

/// Which per-slot cost the dumb-processing policy plans against.
enum class DpPlanningCost {
  kSourceDistortion,    ///< D(k): outage ignored entirely
  kExpectedDistortion,  ///< E[Delta(k)] with k picked ignoring outage
};

struct SolverSettings {
  double epsilon = 1e-6;
  int max_iterations = 100000;
  DpPlanningCost dp_planning_cost = DpPlanningCost::kSourceDistortion;

  bool operator==(const SolverSettings&) const = default;
};

struct SimSettings {
  long horizon = 500;
  std::uint64_t seed = 1;

  bool operator==(const SimSettings&) const = default;
};

/// Harvest section as written in a config file. The mean may be given raw
/// (quanta) or normalised by e_max; the raw value wins when both are set.
struct HarvestSection {
  double p_bad_to_good = 0.3;
  double p_good_to_bad = 0.1;
  double sigma2 = 3.0;
  std::optional<double> mu;
  std::optional<double> mu_bar = 1.0;
  std::optional<int> max_inflow;

  bool operator==(const HarvestSection&) const = default;
};

struct BatterySection {
  std::optional<int> capacity;
  std::optional<double> capacity_bar = 1.5;

  bool operator==(const BatterySection&) const = default;
};

/// Everything a run needs, as loaded from a config document.
struct SystemConfig {
  SourceFit source;
  LinkModel link;
  ConsumptionParams energy;
  HarvestSection harvest;
  BatterySection battery;
  SolverSettings solver;
  SimSettings sim;

  bool operator==(const SystemConfig&) const = default;

  /// Sets the normalised harvest mean and drops any raw value.
  SystemConfig with_mu_bar(double mu_bar) const;
  /// Sets the normalised capacity and drops any raw value.
  SystemConfig with_capacity_bar(double capacity_bar) const;
  SystemConfig with_distance(double distance) const;
};

/// A config with normalised quantities resolved against e_max and every
/// invariant checked.
struct System {
  SourceFit source;
  LinkModel link;
  ConsumptionParams energy;
  HarvestModel harvest;
  int capacity = 0;
  SolverSettings solver;
  SimSettings sim;

  EnergyTable energy_table;
  double snr = 0.0;
  std::vector<std::string> warnings;

  RdSolver rd_solver() const { return RdSolver(source, snr, energy_table); }
};

/// Validates and resolves. Throws ConfigError naming the violated invariant.
System resolve(const SystemConfig& config);

/// Parses a JSON config document. Unknown keys are errors.
SystemConfig config_from_json(const std::string& text);
std::string config_to_json(const SystemConfig& config);
SystemConfig load_config(const std::string& path);

}  // namespace ehdist
