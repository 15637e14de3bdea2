#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "ehdist/errors.hpp"
#include "ehdist/experiments.hpp"

namespace py = pybind11;
using namespace ehdist;

namespace {

System system_from(const std::string& config_json) {
  return resolve(config_json.empty() ? SystemConfig{} : config_from_json(config_json));
}

SystemConfig config_from(const std::string& config_json) {
  return config_json.empty() ? SystemConfig{} : config_from_json(config_json);
}

Controller controller_for(const System& system, const std::string& kind) {
  if (kind == "OP") return op_solve(system).controller;
  if (kind == "GP") return gp_solve(system);
  if (kind == "DP") return dp_solve(system);
  throw py::value_error("controller kind must be OP, GP or DP");
}

py::dict solve(const std::string& config_json) {
  const System system = system_from(config_json);
  const auto plan = op_solve(system);
  const RunSummary s = summarize(system, plan.solution);
  py::dict out;
  out["gain"] = s.gain;
  out["iterations"] = s.iterations;
  out["final_span"] = s.final_span;
  out["e_max"] = s.e_max;
  out["e_min"] = s.e_min;
  out["k_r_star"] = s.k_r;
  out["capacity"] = s.capacity;
  out["warnings"] = s.warnings;
  std::vector<std::vector<int>> actions(2);
  for (int x = 0; x < 2; ++x) {
    for (int b = 0; b <= system.capacity; ++b) actions[static_cast<std::size_t>(x)].push_back(plan.controller.action(x, b));
  }
  out["actions"] = actions;
  out["levels"] = plan.controller.levels();
  out["threshold"] = verify_threshold(plan.solution.policy).pass;
  return out;
}

py::dict simulate_policy(const std::string& config_json, const std::string& kind, long horizon,
                         std::uint64_t seed) {
  const System system = system_from(config_json);
  SimOptions options;
  options.horizon = horizon;
  options.seed = seed;
  const SimResult result = simulate(system, controller_for(system, kind), options);
  std::ostringstream csv;
  write_trace_csv(csv, result.trace);
  py::dict out;
  out["mean_distortion"] = result.report.mean_distortion;
  out["half_width"] = result.report.half_width;
  out["empty_fraction"] = result.report.empty_fraction;
  out["csv"] = csv.str();
  return out;
}

}  // namespace

PYBIND11_MODULE(_ehdist, m) {
  m.doc() = "Compression level and energy management for an energy-harvesting sensor";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<UnsupportedConfigError>(m, "UnsupportedConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<CausalityError>(m, "CausalityError", PyExc_RuntimeError);

  m.def("default_config", [] { return config_to_json(SystemConfig{}); },
        "Default configuration as a JSON document.");

  m.def("source_distortion",
        [](int k, double a, double b, double d_fl, int m_levels) {
          SourceFit fit;
          fit.a = a;
          fit.b = b;
          fit.d_fl = d_fl;
          fit.m = m_levels;
          fit.validate();
          return source_distortion(k, fit);
        },
        py::arg("k"), py::arg("a") = 0.69, py::arg("b") = 3.27, py::arg("d_fl") = 1.0, py::arg("m") = 20);

  m.def("expected_distortion",
        [](int k, const std::string& config_json) {
          const System s = system_from(config_json);
          return expected_distortion(k, s.source, s.snr);
        },
        py::arg("k"), py::arg("config") = "");

  m.def("solve_k_r", [](const std::string& config_json) { return system_from(config_json).rd_solver().k_r(); },
        py::arg("config") = "");

  m.def("solve_k_star",
        [](int u, const std::string& config_json) {
          const auto r = system_from(config_json).rd_solver().solve(u);
          return py::make_tuple(r.k, r.expected_distortion);
        },
        py::arg("u"), py::arg("config") = "", "(k*, expected distortion) for a budget of u quanta.");

  m.def("energy_table", [](const std::string& config_json) { return system_from(config_json).energy_table.quanta; },
        py::arg("config") = "");

  m.def("solve", &solve, py::arg("config") = "", "Optimal policy, gain and summary figures.");

  m.def("evaluate",
        [](const std::string& config_json, const std::string& kind) {
          const System s = system_from(config_json);
          return evaluate_controller(s, controller_for(s, kind));
        },
        py::arg("config") = "", py::arg("kind") = "OP", "Long-run expected distortion of OP, GP or DP.");

  m.def("sweep_mu",
        [](const std::vector<double>& mu_bars, const std::vector<double>& b_bars, const std::string& config_json) {
          std::vector<py::tuple> rows;
          for (const auto& r : sweep_mu(config_from(config_json), mu_bars, b_bars)) {
            rows.push_back(py::make_tuple(r.mu_bar, r.b_bar, r.gain));
          }
          return rows;
        },
        py::arg("mu_bars"), py::arg("b_bars"), py::arg("config") = "");

  m.def("sweep_distance",
        [](const std::vector<double>& distances, const std::vector<double>& b_bars, const std::string& config_json) {
          std::vector<py::tuple> rows;
          for (const auto& r : sweep_distance(config_from(config_json), distances, b_bars)) {
            rows.push_back(py::make_tuple(r.distance, r.b_bar, r.gain));
          }
          return rows;
        },
        py::arg("distances"), py::arg("b_bars"), py::arg("config") = "");

  m.def("compare",
        [](const std::vector<double>& mu_bars, const std::string& config_json) {
          std::vector<py::tuple> rows;
          for (const auto& r : compare_policies(config_from(config_json), mu_bars)) {
            rows.push_back(py::make_tuple(r.mu_bar, r.gain_op, r.gain_gp, r.gain_dp));
          }
          return rows;
        },
        py::arg("mu_bars"), py::arg("config") = "");

  m.def("simulate", &simulate_policy, py::arg("config") = "", py::arg("kind") = "OP",
        py::arg("horizon") = 500, py::arg("seed") = 1);

  m.def("verify",
        [](const std::string& config_json, std::uint64_t seed) {
          return to_json(verify(system_from(config_json), seed));
        },
        py::arg("config") = "", py::arg("seed") = 1, "Verification report as a JSON document.");
}
