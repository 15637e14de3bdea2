#include "ehdist/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "ehdist/errors.hpp"

namespace ehdist {

MdpModel::MdpModel(int capacity, std::array<std::vector<double>, 2> harvest_pmf,
                   std::array<std::array<double, 2>, 2> source_kernel,
                   std::vector<double> action_cost)
    : capacity_(capacity),
      harvest_pmf_(std::move(harvest_pmf)),
      source_kernel_(source_kernel),
      action_cost_(std::move(action_cost)) {
  if (capacity_ < 0) throw DomainError("battery capacity must be >= 0");
  if (action_cost_.size() != static_cast<std::size_t>(capacity_) + 1) {
    throw DomainError("need one action cost per u in {0..B}");
  }
  for (const auto& pmf : harvest_pmf_) {
    if (pmf.empty()) throw DomainError("harvest pmf must not be empty");
  }
}

std::vector<double> MdpModel::transition(int x, int b, int u) const {
  if (u < 0 || u > b || b > capacity_) throw CausalityError("action must satisfy 0 <= u <= b");
  std::vector<double> next(static_cast<std::size_t>(num_states()), 0.0);
  const auto& pmf = harvest_pmf_[x];
  for (int x_next = 0; x_next < 2; ++x_next) {
    const double px = source_kernel_[x][x_next];
    for (std::size_t e = 0; e < pmf.size(); ++e) {
      const int b_next = std::min(b - u + static_cast<int>(e), capacity_);
      next[static_cast<std::size_t>(index(x_next, b_next))] += px * pmf[e];
    }
  }
  return next;
}

std::array<std::vector<double>, 2> MdpModel::expected_next_value(
    const std::vector<double>& values) const {
  const int levels = capacity_ + 1;
  std::array<std::vector<double>, 2> out;
  for (int x = 0; x < 2; ++x) {
    const auto& pmf = harvest_pmf_[x];
    auto& row = out[x];
    row.assign(static_cast<std::size_t>(levels), 0.0);
    for (int r = 0; r < levels; ++r) {
      double acc = 0.0;
      for (int x_next = 0; x_next < 2; ++x_next) {
        const double px = source_kernel_[x][x_next];
        if (px == 0.0) continue;
        const double* v = values.data() + static_cast<std::ptrdiff_t>(x_next) * levels;
        double inner = 0.0;
        for (std::size_t e = 0; e < pmf.size(); ++e) {
          if (pmf[e] == 0.0) continue;
          inner += pmf[e] * v[std::min(r + static_cast<int>(e), capacity_)];
        }
        acc += px * inner;
      }
      row[static_cast<std::size_t>(r)] = acc;
    }
  }
  return out;
}

bool MdpModel::never_harvests() const {
  for (const auto& pmf : harvest_pmf_) {
    for (std::size_t e = 1; e < pmf.size(); ++e) {
      if (pmf[e] > 0.0) return false;
    }
  }
  return true;
}

double MdpModel::q_value(const std::vector<double>& values, int x, int b, int u) const {
  if (u < 0 || u > b) throw CausalityError("action must satisfy 0 <= u <= b");
  const auto next = transition(x, b, u);
  return cost(u) + std::inner_product(next.begin(), next.end(), values.begin(), 0.0);
}

std::vector<double> optimal_action_costs(const System& system) {
  const RdSolver solver = system.rd_solver();
  std::vector<double> costs;
  costs.reserve(static_cast<std::size_t>(system.capacity) + 1);
  for (int u = 0; u <= system.capacity; ++u) costs.push_back(solver.solve(u).expected_distortion);
  return costs;
}

MdpModel build_model(const System& system, std::vector<double> action_cost) {
  const HarvestModel& h = system.harvest;
  std::array<std::array<double, 2>, 2> kernel{};
  kernel[kBadState] = {1.0 - h.p_bad_to_good, h.p_bad_to_good};
  kernel[kGoodState] = {h.p_good_to_bad, 1.0 - h.p_good_to_bad};
  return MdpModel(system.capacity, {harvest_pmf(kBadState, h), harvest_pmf(kGoodState, h)}, kernel,
                  std::move(action_cost));
}

MdpModel build_model(const System& system) {
  return build_model(system, optimal_action_costs(system));
}

MdpSolution rvia_solve(const MdpModel& model, const RviaOptions& options) {
  if (!(options.epsilon > 0.0)) throw DomainError("epsilon must be > 0");
  const int levels = model.capacity() + 1;
  const int n = model.num_states();
  const int ref_b = options.reference.b < 0 ? model.capacity() : options.reference.b;
  const int ref = model.index(options.reference.x, ref_b);

  std::vector<double> values(static_cast<std::size_t>(n), 0.0);
  std::vector<double> updated(static_cast<std::size_t>(n), 0.0);
  std::vector<int> argmin(static_cast<std::size_t>(n), 0);
  double span = std::numeric_limits<double>::infinity();

  // Iterates stay non-increasing in b, so an action whose cost is no lower
  // than that of u - 1 never beats u - 1. Only the drops in cost compete.
  std::vector<int> candidates;
  for (int u = 1; u < levels; ++u) {
    if (model.cost(u) < model.cost(u - 1)) candidates.push_back(u);
  }

  for (int it = 1; it <= options.max_iterations; ++it) {
    const auto next_value = model.expected_next_value(values);
    double diff_min = std::numeric_limits<double>::infinity();
    double diff_max = -std::numeric_limits<double>::infinity();
    for (int x = 0; x < 2; ++x) {
      const auto& w = next_value[x];
      for (int b = 0; b < levels; ++b) {
        double best = model.cost(0) + w[static_cast<std::size_t>(b)];
        int best_u = 0;
        for (const int u : candidates) {
          if (u > b) break;
          const double q = model.cost(u) + w[static_cast<std::size_t>(b - u)];
          // Near-ties resolve to the smaller action.
          if (q < best - 1e-12 * (1.0 + std::abs(best))) {
            best = q;
            best_u = u;
          }
        }
        const auto s = static_cast<std::size_t>(x * levels + b);
        updated[s] = best;
        argmin[s] = best_u;
        const double diff = best - values[s];
        diff_min = std::min(diff_min, diff);
        diff_max = std::max(diff_max, diff);
      }
    }
    span = diff_max - diff_min;
    const double offset = updated[static_cast<std::size_t>(ref)];
    for (int s = 0; s < n; ++s) values[static_cast<std::size_t>(s)] = updated[static_cast<std::size_t>(s)] - offset;

    if (span <= options.epsilon) {
      MdpSolution solution;
      solution.policy = Policy{model.capacity(), argmin, "OP"};
      // Without harvest every policy sends finitely often, so the average
      // cost is exactly that of never sending.
      solution.gain = model.never_harvests() ? model.cost(0) : 0.5 * (diff_max + diff_min);
      solution.relative_values = values;
      solution.iterations = it;
      solution.final_span = span;
      return solution;
    }
  }
  throw ConvergenceError("relative value iteration did not converge in " +
                             std::to_string(options.max_iterations) +
                             " iterations (span " + std::to_string(span) + ")",
                         span);
}

std::vector<std::vector<double>> induced_chain(const MdpModel& model, const Policy& policy) {
  if (policy.capacity != model.capacity() ||
      policy.action.size() != static_cast<std::size_t>(model.num_states())) {
    throw DomainError("policy does not match the model's state space");
  }
  std::vector<std::vector<double>> chain;
  chain.reserve(static_cast<std::size_t>(model.num_states()));
  for (int s = 0; s < model.num_states(); ++s) {
    const State st = model.state(s);
    chain.push_back(model.transition(st.x, st.b, policy.at(st.x, st.b)));
  }
  return chain;
}

namespace {

constexpr int kDenseLimit = 2000;

// reach[s][t]: t reachable from s in zero or more steps.
std::vector<std::vector<char>> reachability(const std::vector<std::vector<double>>& chain) {
  const std::size_t n = chain.size();
  std::vector<std::vector<std::size_t>> successors(n);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      if (chain[s][t] > 0.0) successors[s].push_back(t);
    }
  }
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    auto& seen = reach[s];
    seen[s] = 1;
    stack.assign(1, s);
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (const std::size_t t : successors[v]) {
        if (!seen[t]) {
          seen[t] = 1;
          stack.push_back(t);
        }
      }
    }
  }
  return reach;
}

// Stationary distribution of a closed class.
std::vector<double> class_stationary(const std::vector<std::vector<double>>& chain,
                                     const std::vector<std::size_t>& members) {
  const auto k = static_cast<Eigen::Index>(members.size());
  Eigen::MatrixXd a(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      a(i, j) = chain[members[static_cast<std::size_t>(j)]][members[static_cast<std::size_t>(i)]] -
                (i == j ? 1.0 : 0.0);
    }
  }
  // Replace one balance equation by the normalisation.
  a.row(k - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
  rhs(k - 1) = 1.0;
  const Eigen::VectorXd pi = a.fullPivLu().solve(rhs);
  return {pi.data(), pi.data() + k};
}

std::vector<double> long_run_power(const std::vector<std::vector<double>>& chain, std::size_t start) {
  const std::size_t n = chain.size();
  std::vector<double> dist(n, 0.0), next(n, 0.0);
  dist[start] = 1.0;
  // Lazy chain (I + P)/2: same limiting distribution, aperiodic.
  for (int it = 0; it < 10'000'000; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t s = 0; s < n; ++s) {
      if (dist[s] == 0.0) continue;
      next[s] += 0.5 * dist[s];
      for (std::size_t t = 0; t < n; ++t) next[t] += 0.5 * dist[s] * chain[s][t];
    }
    double change = 0.0;
    for (std::size_t s = 0; s < n; ++s) change += std::abs(next[s] - dist[s]);
    dist.swap(next);
    if (change < 1e-14) break;
  }
  return dist;
}

}  // namespace

SteadyState steady_state(const MdpModel& model, const Policy& policy,
                         const std::vector<double>& state_cost) {
  const auto chain = induced_chain(model, policy);
  const std::size_t n = chain.size();
  if (state_cost.size() != n) throw DomainError("need one cost per state");
  const std::size_t start = static_cast<std::size_t>(model.index(kGoodState, model.capacity()));

  const auto reach = reachability(chain);
  // Recurrent states: everything they reach reaches them back.
  std::vector<int> class_of(n, -1);
  std::vector<std::vector<std::size_t>> classes;
  for (std::size_t s = 0; s < n; ++s) {
    if (class_of[s] >= 0) continue;
    bool recurrent = true;
    for (std::size_t t = 0; t < n && recurrent; ++t) {
      if (reach[s][t] && !reach[t][s]) recurrent = false;
    }
    if (!recurrent) continue;
    std::vector<std::size_t> members;
    for (std::size_t t = 0; t < n; ++t) {
      if (reach[s][t]) {
        members.push_back(t);
        class_of[t] = static_cast<int>(classes.size());
      }
    }
    classes.push_back(std::move(members));
  }

  SteadyState result;
  result.multichain = classes.size() > 1;
  result.distribution.assign(n, 0.0);

  if (n > static_cast<std::size_t>(kDenseLimit)) {
    result.distribution = long_run_power(chain, start);
  } else if (class_of[start] >= 0 || classes.size() == 1) {
    const auto& members = classes[class_of[start] >= 0 ? static_cast<std::size_t>(class_of[start]) : 0];
    const auto pi = class_stationary(chain, members);
    for (std::size_t i = 0; i < members.size(); ++i) result.distribution[members[i]] = pi[i];
  } else {
    // Transient start: weight each closed class by its absorption probability.
    std::vector<std::size_t> transient;
    std::vector<Eigen::Index> position(n, -1);
    for (std::size_t s = 0; s < n; ++s) {
      if (class_of[s] < 0) {
        position[s] = static_cast<Eigen::Index>(transient.size());
        transient.push_back(s);
      }
    }
    const auto t = static_cast<Eigen::Index>(transient.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(t, t);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(t, static_cast<Eigen::Index>(classes.size()));
    for (Eigen::Index i = 0; i < t; ++i) {
      const auto& row = chain[transient[static_cast<std::size_t>(i)]];
      for (std::size_t j = 0; j < n; ++j) {
        if (row[j] == 0.0) continue;
        if (class_of[j] < 0) {
          a(i, position[j]) -= row[j];
        } else {
          rhs(i, class_of[j]) += row[j];
        }
      }
    }
    const Eigen::MatrixXd absorb = a.fullPivLu().solve(rhs);
    for (std::size_t c = 0; c < classes.size(); ++c) {
      const double weight = absorb(position[start], static_cast<Eigen::Index>(c));
      if (weight <= 0.0) continue;
      const auto pi = class_stationary(chain, classes[c]);
      for (std::size_t i = 0; i < classes[c].size(); ++i) {
        result.distribution[classes[c][i]] += weight * pi[i];
      }
    }
  }

  for (std::size_t s = 0; s < n; ++s) result.gain += result.distribution[s] * state_cost[s];
  return result;
}

SteadyState steady_state(const MdpModel& model, const Policy& policy) {
  std::vector<double> state_cost;
  state_cost.reserve(static_cast<std::size_t>(model.num_states()));
  for (int s = 0; s < model.num_states(); ++s) {
    const State st = model.state(s);
    state_cost.push_back(model.cost(policy.at(st.x, st.b)));
  }
  return steady_state(model, policy, state_cost);
}

double steady_state_cost(const MdpModel& model, const Policy& policy) {
  return steady_state(model, policy).gain;
}

ThresholdReport verify_threshold(const Policy& policy) {
  ThresholdReport report;
  for (int x = 0; x < 2; ++x) {
    for (int b = 0; b < policy.capacity; ++b) {
      if (policy.at(x, b + 1) < policy.at(x, b)) {
        report.pass = false;
        report.violations.push_back({x, b});
      }
    }
  }
  return report;
}

StructureReport verify_convexity(int capacity, const std::vector<double>& values, double tolerance) {
  StructureReport report;
  const int levels = capacity + 1;
  for (int x = 0; x < 2; ++x) {
    const double* v = values.data() + static_cast<std::ptrdiff_t>(x) * levels;
    for (int b = 1; b + 1 < levels; ++b) {
      const double second = v[b + 1] - 2.0 * v[b] + v[b - 1];
      report.worst_convexity = std::min(report.worst_convexity, second);
      if (second < -tolerance) {
        report.convex_pass = false;
        report.convexity_violations.push_back({x, b});
      }
    }
  }
  return report;
}

StructureReport verify_structure(const MdpModel& model, const MdpSolution& solution,
                                 double tolerance) {
  StructureReport report =
      verify_convexity(model.capacity(), solution.relative_values, tolerance);
  const auto next_value = model.expected_next_value(solution.relative_values);
  auto q = [&](int x, int b, int u) {
    return model.cost(u) + next_value[x][static_cast<std::size_t>(b - u)];
  };
  for (int x = 0; x < 2; ++x) {
    for (int b = 0; b < model.capacity(); ++b) {
      for (int u = 0; u + 1 <= b; ++u) {
        const double cross = (q(x, b + 1, u + 1) - q(x, b + 1, u)) - (q(x, b, u + 1) - q(x, b, u));
        report.worst_submodularity = std::max(report.worst_submodularity, cross);
        if (cross > tolerance) {
          report.submodular_pass = false;
          report.submodularity_violations.push_back({x, b});
        }
      }
    }
  }
  return report;
}

}  // namespace ehdist
