#include "ehdist/policies.hpp"

#include <algorithm>

#include "ehdist/errors.hpp"

namespace ehdist {

std::string_view to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::kOptimal:
      return "OP";
    case ControllerKind::kGreedy:
      return "GP";
    case ControllerKind::kDumbProcessing:
      return "DP";
  }
  return "?";
}

Controller::Controller(ControllerKind kind, Policy policy, std::vector<int> level_of_budget)
    : kind_(kind), policy_(std::move(policy)), level_of_budget_(std::move(level_of_budget)) {
  if (level_of_budget_.size() != static_cast<std::size_t>(policy_.capacity) + 1) {
    throw DomainError("need one level per budget u in {0..B}");
  }
  for (int x = 0; x < 2; ++x) {
    for (int b = 0; b <= policy_.capacity; ++b) {
      const int u = policy_.at(x, b);
      if (u < 0 || u > b) throw CausalityError("policy spends more than the battery holds");
    }
  }
  policy_.tag = std::string(to_string(kind));
}

std::vector<int> optimal_levels(const System& system) {
  const RdSolver solver = system.rd_solver();
  std::vector<int> levels;
  levels.reserve(static_cast<std::size_t>(system.capacity) + 1);
  for (int u = 0; u <= system.capacity; ++u) levels.push_back(solver.solve(u).k);
  return levels;
}

OptimalPlan op_solve(const System& system) {
  const MdpModel model = build_model(system);
  MdpSolution solution =
      rvia_solve(model, {system.solver.epsilon, system.solver.max_iterations, {kGoodState, -1}});
  Controller controller(ControllerKind::kOptimal, solution.policy, optimal_levels(system));
  solution.policy.tag = "OP";
  return {std::move(controller), std::move(solution)};
}

int greedy_target(const System& system) {
  const RdSolver solver = system.rd_solver();
  return system.energy_table.at(solver.k_r());
}

int greedy_action(int b, int target) { return std::min(b, target); }

Controller gp_solve(const System& system) {
  const int target = greedy_target(system);
  Policy policy{system.capacity, {}, "GP"};
  for (int x = 0; x < 2; ++x) {
    for (int b = 0; b <= system.capacity; ++b) policy.action.push_back(greedy_action(b, target));
  }
  return Controller(ControllerKind::kGreedy, std::move(policy), optimal_levels(system));
}

int dp_inner_k(int u, const SourceFit& fit, const EnergyTable& energy) {
  int best = 0;
  double best_distortion = source_distortion(0, fit);
  for (int k = 1; k <= fit.m; ++k) {
    if (energy.at(k) > u) continue;
    const double d = source_distortion(k, fit);
    if (d < best_distortion) {
      best = k;
      best_distortion = d;
    }
  }
  return best;
}

Controller dp_solve(const System& system) {
  std::vector<int> levels;
  std::vector<double> planning_cost;
  for (int u = 0; u <= system.capacity; ++u) {
    const int k = dp_inner_k(u, system.source, system.energy_table);
    levels.push_back(k);
    planning_cost.push_back(system.solver.dp_planning_cost == DpPlanningCost::kSourceDistortion
                                ? source_distortion(k, system.source)
                                : expected_distortion(k, system.source, system.snr));
  }
  const MdpModel model = build_model(system, std::move(planning_cost));
  const MdpSolution solution =
      rvia_solve(model, {system.solver.epsilon, system.solver.max_iterations, {kGoodState, -1}});
  return Controller(ControllerKind::kDumbProcessing, solution.policy, std::move(levels));
}

std::vector<double> true_action_costs(const System& system, const Controller& controller) {
  std::vector<double> costs;
  costs.reserve(controller.levels().size());
  for (const int k : controller.levels()) costs.push_back(expected_distortion(k, system.source, system.snr));
  return costs;
}

double evaluate_controller(const System& system, const Controller& controller) {
  const MdpModel model = build_model(system, true_action_costs(system, controller));
  return steady_state_cost(model, controller.policy());
}

}  // namespace ehdist
