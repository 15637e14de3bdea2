#include "ehdist/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include <nlohmann/json.hpp>

#include "ehdist/errors.hpp"
#include "ehdist/oracles.hpp"

namespace ehdist {
namespace {

std::string num(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.10g", v);
  return buffer;
}

// Runs fn(i) for i in [0, n) on a small worker pool. Results land in their own
// slots, so the output order never depends on scheduling.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, Fn fn) {
  std::vector<T> out(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const std::size_t threads =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

double optimal_gain(const SystemConfig& config) {
  const System system = resolve(config);
  return op_solve(system).solution.gain;
}

}  // namespace

RunSummary summarize(const System& system, const MdpSolution& solution) {
  RunSummary s;
  s.gain = solution.gain;
  s.iterations = solution.iterations;
  s.final_span = solution.final_span;
  s.e_max = system.energy_table.e_max();
  s.e_min = system.energy_table.e_min();
  s.k_r = system.rd_solver().k_r();
  s.capacity = system.capacity;
  s.mu = system.harvest.mu;
  s.snr = system.snr;
  s.warnings = system.warnings;
  return s;
}

std::string to_json(const RunSummary& s) {
  nlohmann::json j = {{"gain", s.gain},       {"iterations", s.iterations},
                      {"final_span", s.final_span}, {"e_max", s.e_max},
                      {"e_min", s.e_min},     {"k_r_star", s.k_r},
                      {"capacity", s.capacity}, {"mu", s.mu},
                      {"avg_snr", s.snr},     {"warnings", s.warnings}};
  return j.dump(2);
}

void write_policy_table(std::ostream& out, const System& system, const Controller& controller) {
  const auto costs = true_action_costs(system, controller);
  out << "source_state,battery_level,action,k_star,expected_cost\n";
  for (int x = 0; x < 2; ++x) {
    for (int b = 0; b <= system.capacity; ++b) {
      const int u = controller.action(x, b);
      out << x << ',' << b << ',' << u << ',' << controller.level(u) << ','
          << num(costs[static_cast<std::size_t>(u)]) << '\n';
    }
  }
}

std::vector<MuSweepRow> sweep_mu(const SystemConfig& config, const std::vector<double>& mu_bars,
                                 const std::vector<double>& b_bars) {
  std::vector<MuSweepRow> grid;
  for (const double mu : mu_bars) {
    for (const double b : b_bars) grid.push_back({mu, b, 0.0});
  }
  std::sort(grid.begin(), grid.end(), [](const MuSweepRow& l, const MuSweepRow& r) {
    return std::tie(l.mu_bar, l.b_bar) < std::tie(r.mu_bar, r.b_bar);
  });
  const auto gains = parallel_map<double>(grid.size(), [&](std::size_t i) {
    return optimal_gain(config.with_mu_bar(grid[i].mu_bar).with_capacity_bar(grid[i].b_bar));
  });
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i].gain = gains[i];
  return grid;
}

std::vector<DistanceSweepRow> sweep_distance(const SystemConfig& config,
                                             const std::vector<double>& distances,
                                             const std::vector<double>& b_bars) {
  std::vector<DistanceSweepRow> grid;
  for (const double d : distances) {
    for (const double b : b_bars) grid.push_back({d, b, 0.0});
  }
  std::sort(grid.begin(), grid.end(), [](const DistanceSweepRow& l, const DistanceSweepRow& r) {
    return std::tie(l.distance, l.b_bar) < std::tie(r.distance, r.b_bar);
  });
  const auto gains = parallel_map<double>(grid.size(), [&](std::size_t i) {
    return optimal_gain(config.with_distance(grid[i].distance).with_capacity_bar(grid[i].b_bar));
  });
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i].gain = gains[i];
  return grid;
}

std::vector<CompareRow> compare_policies(const SystemConfig& config, const std::vector<double>& mu_bars) {
  std::vector<double> sorted = mu_bars;
  std::sort(sorted.begin(), sorted.end());
  return parallel_map<CompareRow>(sorted.size(), [&](std::size_t i) {
    const System system = resolve(config.with_mu_bar(sorted[i]));
    CompareRow row;
    row.mu_bar = sorted[i];
    row.gain_op = evaluate_controller(system, op_solve(system).controller);
    row.gain_gp = evaluate_controller(system, gp_solve(system));
    row.gain_dp = evaluate_controller(system, dp_solve(system));
    return row;
  });
}

void write_csv(std::ostream& out, const std::vector<MuSweepRow>& rows) {
  out << "mu_bar,B_bar,gain\n";
  for (const auto& r : rows) out << num(r.mu_bar) << ',' << num(r.b_bar) << ',' << num(r.gain) << '\n';
}

void write_csv(std::ostream& out, const std::vector<DistanceSweepRow>& rows) {
  out << "d,B_bar,gain\n";
  for (const auto& r : rows) out << num(r.distance) << ',' << num(r.b_bar) << ',' << num(r.gain) << '\n';
}

void write_csv(std::ostream& out, const std::vector<CompareRow>& rows) {
  out << "mu_bar,gain_OP,gain_GP,gain_DP\n";
  for (const auto& r : rows) {
    out << num(r.mu_bar) << ',' << num(r.gain_op) << ',' << num(r.gain_gp) << ',' << num(r.gain_dp)
        << '\n';
  }
}

TraceBundle trace_bundle(const System& system, const SimOptions& options) {
  TraceBundle bundle{{op_solve(system).controller, gp_solve(system), dp_solve(system)}, {}, {}};
  for (std::size_t i = 0; i < 3; ++i) {
    bundle.runs[i] = simulate(system, bundle.controllers[i], options);
    if (!bundle.runs[i].trace.empty()) bundle.stats[i] = battery_trace_stats(bundle.runs[i].trace);
  }
  return bundle;
}

bool VerifyReport::pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.pass || !c.enforced; });
}

VerifyReport verify(const System& system, std::uint64_t seed) {
  VerifyReport report;
  const double tolerance = 10.0 * system.solver.epsilon;
  const RdSolver solver = system.rd_solver();
  auto objective = [&](int k) { return expected_distortion(k, system.source, system.snr); };

  {
    const auto best = oracle::brute_k_r(system.source, system.snr);
    const bool ok = oracle::attains(solver.k_r(), best, objective);
    report.checks.push_back({"k_r_matches_scan", ok, true,
                             "k_r=" + std::to_string(solver.k_r()) + " scan=" + std::to_string(best.k)});
  }
  {
    int mismatches = 0;
    const int top = std::max(system.energy_table.e_max(), system.capacity);
    for (int u = 0; u <= top; ++u) {
      const auto best = oracle::brute_k_star(u, system.source, system.snr, system.energy_table);
      if (!oracle::attains(solver.solve(u).k, best, objective)) ++mismatches;
    }
    report.checks.push_back({"k_star_matches_scan", mismatches == 0, true,
                             std::to_string(mismatches) + " mismatches over u=0.." + std::to_string(top)});
  }
  {
    const int changes = oracle::derivative_sign_changes(system.source, system.snr);
    report.checks.push_back(
        {"derivative_single_sign_change", changes <= 1, true, std::to_string(changes) + " sign changes"});
  }

  const MdpModel model = build_model(system);
  const MdpSolution solution =
      rvia_solve(model, {system.solver.epsilon, system.solver.max_iterations, {kGoodState, -1}});
  {
    const auto threshold = verify_threshold(solution.policy);
    report.checks.push_back({"threshold_policy", threshold.pass, true,
                             std::to_string(threshold.violations.size()) + " inversions"});
  }
  {
    const double steady = steady_state_cost(model, solution.policy);
    const bool ok = std::abs(steady - solution.gain) <= tolerance;
    report.checks.push_back({"gain_matches_steady_state", ok, true,
                             "rvia=" + num(solution.gain) + " steady=" + num(steady)});
  }
  {
    const auto structure = verify_structure(model, solution, tolerance);
    report.checks.push_back({"value_convex_in_battery", structure.convex_pass, false,
                             "worst second difference " + num(structure.worst_convexity)});
    report.checks.push_back({"q_submodular", structure.submodular_pass, false,
                             "worst cross difference " + num(structure.worst_submodularity)});
  }
  {
    const double op = evaluate_controller(system, op_solve(system).controller);
    const double gp = evaluate_controller(system, gp_solve(system));
    const double dp = evaluate_controller(system, dp_solve(system));
    const bool ok = op <= gp + tolerance && op <= dp + tolerance;
    report.checks.push_back(
        {"optimal_dominates_heuristics", ok, true, "OP=" + num(op) + " GP=" + num(gp) + " DP=" + num(dp)});
  }

  std::mt19937_64 rng(seed);
  {
    int mismatches = 0;
    for (int i = 0; i < 200; ++i) {
      const auto c = oracle::random_rd_case(rng);
      const RdSolver random_solver(c.fit, c.snr, c.energy);
      auto obj = [&](int k) { return expected_distortion(k, c.fit, c.snr); };
      if (!oracle::attains(random_solver.k_r(), oracle::brute_k_r(c.fit, c.snr), obj)) ++mismatches;
      for (int u = 0; u <= c.energy.e_max(); ++u) {
        if (!oracle::attains(random_solver.solve(u).k, oracle::brute_k_star(u, c.fit, c.snr, c.energy), obj)) {
          ++mismatches;
        }
      }
      if (oracle::derivative_sign_changes(c.fit, c.snr) > 1) ++mismatches;
    }
    report.checks.push_back(
        {"random_rate_distortion_oracle", mismatches == 0, true, std::to_string(mismatches) + " of 200 configs"});
  }
  {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const MdpModel tiny = oracle::random_tiny_model(rng);
      const auto solved = rvia_solve(tiny, {system.solver.epsilon, system.solver.max_iterations, {kGoodState, -1}});
      worst = std::max(worst, std::abs(solved.gain - oracle::enumerate_policies(tiny).best_gain));
    }
    report.checks.push_back(
        {"random_policy_enumeration", worst <= tolerance, true, "worst gap " + num(worst)});
  }
  return report;
}

std::string to_json(const VerifyReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"enforced", c.enforced}, {"detail", c.detail}});
  }
  return nlohmann::json{{"pass", report.pass()}, {"checks", checks}}.dump(2);
}

}  // namespace ehdist
