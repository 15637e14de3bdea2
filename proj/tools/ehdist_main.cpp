// Command-line front end: solve, sweep-mu, sweep-distance, compare, trace, verify.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "ehdist/errors.hpp"
#include "ehdist/experiments.hpp"

namespace fs = std::filesystem;
using namespace ehdist;

namespace {

struct Common {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<double> epsilon;
};

SystemConfig load(const Common& common) {
  SystemConfig config = common.config_path.empty() ? SystemConfig{} : load_config(common.config_path);
  if (common.seed) config.sim.seed = *common.seed;
  if (common.epsilon) config.solver.epsilon = *common.epsilon;
  return config;
}

std::ofstream open_out(const Common& common, const std::string& name) {
  fs::create_directories(common.out_dir);
  const fs::path path = fs::path(common.out_dir) / name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_summary(const Common& common, const System& system, const MdpSolution& solution) {
  open_out(common, "summary.json") << to_json(summarize(system, solution)) << '\n';
}

void report_warnings(const System& system) {
  for (const auto& w : system.warnings) std::cerr << "warning: " << w << '\n';
}

// Solves the base configuration so every verb leaves a summary behind.
System solve_base(const Common& common, const SystemConfig& config) {
  System system = resolve(config);
  report_warnings(system);
  const auto plan = op_solve(system);
  write_summary(common, system, plan.solution);
  return system;
}

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> values;
  for (int i = 0; lo + i * step <= hi + 1e-9; ++i) values.push_back(lo + i * step);
  return values;
}

int run_solve(const Common& common) {
  const System system = resolve(load(common));
  report_warnings(system);
  const auto plan = op_solve(system);
  std::ofstream table = open_out(common, "policy_OP.csv");
  write_policy_table(table, system, plan.controller);
  write_summary(common, system, plan.solution);
  std::cout << "J* = " << plan.solution.gain << " after " << plan.solution.iterations
            << " iterations (B = " << system.capacity << ", e_max = " << system.energy_table.e_max()
            << ", k_R* = " << system.rd_solver().k_r() << ")\n";
  return 0;
}

int run_sweep_mu(const Common& common, const std::vector<double>& mu_bars,
                 const std::vector<double>& b_bars) {
  const SystemConfig config = load(common);
  solve_base(common, config);
  const auto rows = sweep_mu(config, mu_bars, b_bars);
  std::ofstream csv = open_out(common, "sweep_mu.csv");
  write_csv(csv, rows);
  std::cout << rows.size() << " points written to " << (fs::path(common.out_dir) / "sweep_mu.csv").string()
            << '\n';
  return 0;
}

int run_sweep_distance(const Common& common, const std::vector<double>& distances,
                       const std::vector<double>& b_bars) {
  const SystemConfig config = load(common);
  solve_base(common, config);
  const auto rows = sweep_distance(config, distances, b_bars);
  std::ofstream csv = open_out(common, "sweep_distance.csv");
  write_csv(csv, rows);
  std::cout << rows.size() << " points written to "
            << (fs::path(common.out_dir) / "sweep_distance.csv").string() << '\n';
  return 0;
}

int run_compare(const Common& common, const std::vector<double>& mu_bars) {
  const SystemConfig config = load(common);
  solve_base(common, config);
  const auto rows = compare_policies(config, mu_bars);
  std::ofstream csv = open_out(common, "compare.csv");
  write_csv(csv, rows);
  for (const auto& r : rows) {
    std::cout << "mu_bar " << r.mu_bar << ": OP " << r.gain_op << "  GP " << r.gain_gp << "  DP "
              << r.gain_dp << '\n';
  }
  return 0;
}

int run_trace(const Common& common, long horizon) {
  const SystemConfig config = load(common);
  const System system = resolve(config);
  report_warnings(system);
  SimOptions options;
  options.horizon = horizon > 0 ? horizon : system.sim.horizon;
  options.seed = system.sim.seed;
  const TraceBundle bundle = trace_bundle(system, options);

  nlohmann::json stats = nlohmann::json::object();
  for (std::size_t i = 0; i < 3; ++i) {
    const std::string tag(to_string(bundle.controllers[i].kind()));
    std::ofstream csv = open_out(common, "trace_" + tag + ".csv");
    write_trace_csv(csv, bundle.runs[i].trace);
    const auto& s = bundle.stats[i];
    stats[tag] = {{"mean_distortion", bundle.runs[i].report.mean_distortion},
                  {"battery_min", s.min},
                  {"battery_max", s.max},
                  {"battery_mean", s.mean},
                  {"empty_fraction", s.empty_fraction},
                  {"empty_in_bad_fraction", s.empty_in_bad_fraction}};
  }
  const auto plan = op_solve(system);
  nlohmann::json summary = nlohmann::json::parse(to_json(summarize(system, plan.solution)));
  summary["seed"] = options.seed;
  summary["horizon"] = options.horizon;
  summary["controllers"] = stats;
  summary["op_never_empty_in_bad_state"] = bundle.stats[0].empty_in_bad_fraction == 0.0;
  open_out(common, "summary.json") << summary.dump(2) << '\n';
  for (std::size_t i = 0; i < 3; ++i) {
    std::cout << to_string(bundle.controllers[i].kind()) << ": mean distortion "
              << bundle.runs[i].report.mean_distortion << ", empty in bad state "
              << bundle.stats[i].empty_in_bad_fraction << '\n';
  }
  return 0;
}

int run_verify(const Common& common) {
  const SystemConfig config = load(common);
  const System system = solve_base(common, config);
  const VerifyReport report = verify(system, system.sim.seed);
  open_out(common, "verify.json") << to_json(report) << '\n';
  for (const auto& c : report.checks) {
    std::cout << (c.pass ? "PASS " : (c.enforced ? "FAIL " : "WARN ")) << c.name << "  " << c.detail
              << '\n';
  }
  if (!report.pass()) {
    std::cerr << "error: verification failed\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-harvesting sensor: compression level and energy management"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--config", common.config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--out", common.out_dir, "Output directory");
  app.add_option("--seed", common.seed, "Simulation seed");
  app.add_option("--epsilon", common.epsilon, "RVIA span tolerance")->check(CLI::PositiveNumber);

  std::vector<double> mu_bars = grid(0.0, 2.0, 0.1);
  std::vector<double> b_bars = {1.0, 1.5, 2.0, 3.0, 5.0};
  std::vector<double> distances = {10, 25, 50, 80, 100, 150, 200, 300, 400, 500, 600, 800, 1000};
  long horizon = 0;

  auto* solve = app.add_subcommand("solve", "Optimal policy table and gain");
  auto* sweep_mu_cmd = app.add_subcommand("sweep-mu", "Gain over normalised harvest mean and battery size");
  sweep_mu_cmd->add_option("--mu-bar", mu_bars, "Normalised harvest means")->delimiter(',');
  sweep_mu_cmd->add_option("--b-bar", b_bars, "Normalised battery sizes")->delimiter(',');
  auto* sweep_d_cmd = app.add_subcommand("sweep-distance", "Gain over distance and battery size");
  sweep_d_cmd->add_option("--distance", distances, "Distances in metres")->delimiter(',');
  sweep_d_cmd->add_option("--b-bar", b_bars, "Normalised battery sizes")->delimiter(',');
  auto* compare = app.add_subcommand("compare", "OP, GP and DP over the harvest mean");
  compare->add_option("--mu-bar", mu_bars, "Normalised harvest means")->delimiter(',');
  auto* trace = app.add_subcommand("trace", "Simulated traces of OP, GP and DP");
  trace->add_option("--horizon", horizon, "Slots to simulate (default from config)");
  auto* verify_cmd = app.add_subcommand("verify", "Oracle and structure checks");
  for (auto* sub : {solve, sweep_mu_cmd, sweep_d_cmd, compare, trace, verify_cmd}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*solve) return run_solve(common);
    if (*sweep_mu_cmd) return run_sweep_mu(common, mu_bars, b_bars);
    if (*sweep_d_cmd) return run_sweep_distance(common, distances, b_bars);
    if (*compare) return run_compare(common, mu_bars);
    if (*trace) return run_trace(common, horizon);
    if (*verify_cmd) return run_verify(common);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const UnsupportedConfigError& e) {
    std::cerr << "unsupported config: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
