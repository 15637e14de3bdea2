#pragma once

#include <string_view>
#include <vector>

#include "ehdist/mdp.hpp"
#include "ehdist/system.hpp"

namespace ehdist {

enum class ControllerKind { kOptimal, kGreedy, kDumbProcessing };

std::string_view to_string(ControllerKind kind);

/// Energy action table plus the inner mapping from a budget u to a level k.
class Controller {
 public:
  Controller(ControllerKind kind, Policy policy, std::vector<int> level_of_budget);

  ControllerKind kind() const { return kind_; }
  const Policy& policy() const { return policy_; }
  int capacity() const { return policy_.capacity; }

  int action(int x, int b) const { return policy_.at(x, b); }
  int level(int u) const { return level_of_budget_.at(static_cast<std::size_t>(u)); }
  const std::vector<int>& levels() const { return level_of_budget_; }

 private:
  ControllerKind kind_;
  Policy policy_;
  std::vector<int> level_of_budget_;
};

/// k*(u) for every u in {0..B}.
std::vector<int> optimal_levels(const System& system);

/// Optimal controller and the solver output it came from.
struct OptimalPlan {
  Controller controller;
  MdpSolution solution;
};

OptimalPlan op_solve(const System& system);

/// Energy the greedy policy aims for: the quantised demand of k_R*.
int greedy_target(const System& system);

/// min(b, target).
int greedy_action(int b, int target);

Controller gp_solve(const System& system);

/// Smallest source distortion among affordable levels, ignoring outage.
int dp_inner_k(int u, const SourceFit& fit, const EnergyTable& energy);

/// Plans with the cost the dumb-processing policy believes in, keeps the
/// energy management of the optimal policy.
Controller dp_solve(const System& system);

/// True expected per-slot distortion of spending u under this controller.
std::vector<double> true_action_costs(const System& system, const Controller& controller);

/// Long-run average of the true expected distortion.
double evaluate_controller(const System& system, const Controller& controller);

}  // namespace ehdist
