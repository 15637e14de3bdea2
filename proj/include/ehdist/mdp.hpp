#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "ehdist/system.hpp"

namespace ehdist {

/// System state (source state, battery level).
struct State {
  int x = 0;
  int b = 0;
  bool operator==(const State&) const = default;
};

/// Average-cost MDP over (x, b) in {0,1} x {0..B} with actions u in {0..b}.
/// The per-slot cost depends only on the action.
class MdpModel {
 public:
  MdpModel(int capacity, std::array<std::vector<double>, 2> harvest_pmf,
           std::array<std::array<double, 2>, 2> source_kernel, std::vector<double> action_cost);

  int capacity() const { return capacity_; }
  int num_states() const { return 2 * (capacity_ + 1); }
  int index(int x, int b) const { return x * (capacity_ + 1) + b; }
  State state(int index) const { return {index / (capacity_ + 1), index % (capacity_ + 1)}; }

  /// p_x(x' | x).
  double source_transition(int x, int x_next) const { return source_kernel_[x][x_next]; }
  const std::vector<double>& harvest_pmf(int x) const { return harvest_pmf_[x]; }
  double cost(int u) const { return action_cost_.at(static_cast<std::size_t>(u)); }
  const std::vector<double>& action_costs() const { return action_cost_; }
  /// True when no source state ever harvests: the battery can only drain.
  bool never_harvests() const;

  /// Successor distribution of (x, b) under u, dense over all states.
  /// Harvests that overflow the battery fold onto b' = B.
  std::vector<double> transition(int x, int b, int u) const;

  /// sum_{x', e} p_x(x'|x) p_e(e|x) J(x', min(r + e, B)) for every residual
  /// r = b - u in {0..B}, one row per current source state.
  std::array<std::vector<double>, 2> expected_next_value(const std::vector<double>& values) const;

  /// Q(s, u) = c(u) + E[J(s')].
  double q_value(const std::vector<double>& values, int x, int b, int u) const;

 private:
  int capacity_;
  std::array<std::vector<double>, 2> harvest_pmf_;
  std::array<std::array<double, 2>, 2> source_kernel_;
  std::vector<double> action_cost_;
};

/// Per-action planning cost c(u) = E[Delta(k*(u))] for u in {0..B}.
std::vector<double> optimal_action_costs(const System& system);

MdpModel build_model(const System& system);
MdpModel build_model(const System& system, std::vector<double> action_cost);

/// State -> action lookup table; the artifact a device stores.
struct Policy {
  int capacity = 0;
  std::vector<int> action;  ///< indexed like MdpModel::index
  std::string tag;          ///< "OP", "GP" or "DP"

  int at(int x, int b) const { return action.at(static_cast<std::size_t>(x * (capacity + 1) + b)); }
};

struct RviaOptions {
  double epsilon = 1e-6;
  int max_iterations = 100000;
  State reference{kGoodState, -1};  ///< b = -1 means b = B
};

struct MdpSolution {
  Policy policy;
  double gain = 0.0;
  std::vector<double> relative_values;
  int iterations = 0;
  double final_span = 0.0;
};

/// Relative value iteration with span-seminorm stopping. Ties in the argmin
/// go to the smallest action. Throws ConvergenceError at the iteration cap.
MdpSolution rvia_solve(const MdpModel& model, const RviaOptions& options = {});

/// Dense transition matrix of the chain induced by a policy.
std::vector<std::vector<double>> induced_chain(const MdpModel& model, const Policy& policy);

struct SteadyState {
  double gain = 0.0;
  std::vector<double> distribution;
  /// More than one closed class: the distribution is the long-run one from
  /// the full-battery good state.
  bool multichain = false;
};

/// Long-run average cost of a stationary policy, weighting
/// cost(state) by the stationary distribution of the induced chain.
SteadyState steady_state(const MdpModel& model, const Policy& policy,
                         const std::vector<double>& state_cost);
SteadyState steady_state(const MdpModel& model, const Policy& policy);
double steady_state_cost(const MdpModel& model, const Policy& policy);

struct ThresholdReport {
  bool pass = true;
  std::vector<State> violations;  ///< states (x, b) with u(x, b+1) < u(x, b)
};

ThresholdReport verify_threshold(const Policy& policy);

struct StructureReport {
  bool convex_pass = true;
  bool submodular_pass = true;
  double worst_convexity = 0.0;     ///< most negative second difference of J in b
  double worst_submodularity = 0.0; ///< largest positive cross difference of Q
  std::vector<State> convexity_violations;
  std::vector<State> submodularity_violations;

  bool pass() const { return convex_pass && submodular_pass; }
};

/// Checks convexity of the relative values in b and submodularity of Q in
/// (b, u), both up to `tolerance`.
StructureReport verify_structure(const MdpModel& model, const MdpSolution& solution,
                                 double tolerance);
/// Convexity check alone, on an arbitrary value table.
StructureReport verify_convexity(int capacity, const std::vector<double>& values,
                                 double tolerance);

}  // namespace ehdist
