#include "ehdist/system.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "ehdist/errors.hpp"

namespace ehdist {

using nlohmann::json;

SystemConfig SystemConfig::with_mu_bar(double mu_bar) const {
  SystemConfig copy = *this;
  copy.harvest.mu.reset();
  copy.harvest.mu_bar = mu_bar;
  copy.harvest.max_inflow.reset();
  return copy;
}

SystemConfig SystemConfig::with_capacity_bar(double capacity_bar) const {
  SystemConfig copy = *this;
  copy.battery.capacity.reset();
  copy.battery.capacity_bar = capacity_bar;
  return copy;
}

SystemConfig SystemConfig::with_distance(double distance) const {
  SystemConfig copy = *this;
  copy.link.distance = distance;
  return copy;
}

System resolve(const SystemConfig& config) {
  config.source.validate();
  config.link.validate();
  config.energy.validate();
  if (config.source.l0 > config.source.s) {
    throw UnsupportedConfigError("source.l0 must be <= source.s");
  }
  if (!(config.solver.epsilon > 0.0)) throw ConfigError("solver.epsilon must be > 0");
  if (config.solver.max_iterations < 1) throw ConfigError("solver.max_iterations must be >= 1");
  if (config.sim.horizon < 1) throw ConfigError("sim.horizon must be >= 1");

  System system;
  system.source = config.source;
  system.link = config.link;
  system.energy = config.energy;
  system.solver = config.solver;
  system.sim = config.sim;
  system.energy_table = energy_table(config.source, config.link.p_tx, config.energy);
  system.snr = avg_snr(config.link);
  const double e_max = system.energy_table.e_max();

  const BatterySection& battery = config.battery;
  if (battery.capacity) {
    system.capacity = *battery.capacity;
    if (battery.capacity_bar &&
        std::lround(*battery.capacity_bar * e_max) != *battery.capacity) {
      system.warnings.push_back("battery.capacity overrides battery.capacity_bar");
    }
  } else if (battery.capacity_bar) {
    if (!(*battery.capacity_bar >= 0.0)) throw ConfigError("battery.capacity_bar must be >= 0");
    system.capacity = static_cast<int>(std::lround(*battery.capacity_bar * e_max));
  } else {
    throw ConfigError("battery needs capacity or capacity_bar");
  }
  if (system.capacity < 0) throw ConfigError("battery.capacity must be >= 0");

  const HarvestSection& harvest = config.harvest;
  HarvestModel model;
  model.p_bad_to_good = harvest.p_bad_to_good;
  model.p_good_to_bad = harvest.p_good_to_bad;
  model.sigma2 = harvest.sigma2;
  if (harvest.mu) {
    model.mu = *harvest.mu;
    if (harvest.mu_bar && std::abs(*harvest.mu_bar * e_max - *harvest.mu) > 1e-9) {
      system.warnings.push_back("harvest.mu overrides harvest.mu_bar");
    }
  } else if (harvest.mu_bar) {
    model.mu = *harvest.mu_bar * e_max;
  } else {
    throw ConfigError("harvest needs mu or mu_bar");
  }
  model.max_inflow = harvest.max_inflow ? *harvest.max_inflow
                                        : default_max_inflow(model.mu, model.sigma2, system.capacity);
  model.validate();
  system.harvest = model;
  return system;
}

namespace {

// Reads named members of one section and rejects anything else.
class SectionReader {
 public:
  SectionReader(const json& root, const std::string& name) : name_(name) {
    if (!root.contains(name)) return;
    section_ = &root.at(name);
    if (!section_->is_object()) throw ConfigError(name + " must be an object");
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    if (section_ == nullptr || !section_->contains(key)) return;
    try {
      out = section_->at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(name_ + "." + key + ": " + e.what());
    }
  }

  template <typename T>
  void read(const char* key, std::optional<T>& out) {
    seen_.insert(key);
    if (section_ == nullptr || !section_->contains(key)) return;
    const json& value = section_->at(key);
    if (value.is_null()) {
      out.reset();
      return;
    }
    try {
      out = value.get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(name_ + "." + key + ": " + e.what());
    }
  }

  void finish() const {
    if (section_ == nullptr) return;
    for (const auto& item : section_->items()) {
      if (!seen_.count(item.key())) throw ConfigError("unknown key " + name_ + "." + item.key());
    }
  }

 private:
  std::string name_;
  const json* section_ = nullptr;
  std::set<std::string> seen_;
};

const char* to_string(DpPlanningCost cost) {
  return cost == DpPlanningCost::kSourceDistortion ? "source" : "expected";
}

}  // namespace

SystemConfig config_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> kSections = {"source", "link",   "energy", "harvest",
                                                  "battery", "solver", "sim"};
  for (const auto& item : root.items()) {
    if (!kSections.count(item.key())) throw ConfigError("unknown section " + item.key());
  }

  SystemConfig c;
  {
    SectionReader r(root, "source");
    r.read("a", c.source.a);
    r.read("b", c.source.b);
    r.read("d_fl", c.source.d_fl);
    r.read("m", c.source.m);
    r.read("l0", c.source.l0);
    r.read("s", c.source.s);
    r.finish();
  }
  {
    SectionReader r(root, "link");
    r.read("p_tx", c.link.p_tx);
    r.read("distance", c.link.distance);
    r.read("d0", c.link.d0);
    r.read("eta", c.link.eta);
    r.read("f0", c.link.f0);
    r.read("noise_psd_dbm_hz", c.link.noise_psd_dbm_hz);
    r.read("bandwidth", c.link.bandwidth);
    r.finish();
  }
  {
    SectionReader r(root, "energy");
    r.read("e0", c.energy.e0);
    r.read("alpha_p", c.energy.alpha_p);
    r.read("beta_p", c.energy.beta_p);
    r.read("eta_a", c.energy.eta_a);
    r.read("beta_s", c.energy.beta_s);
    r.read("beta_c", c.energy.beta_c);
    r.read("beta_e", c.energy.beta_e);
    r.read("circuit_rate", c.energy.circuit_rate);
    r.read("t_slot", c.energy.t_slot);
    r.read("quantum", c.energy.quantum);
    r.finish();
  }
  {
    SectionReader r(root, "harvest");
    r.read("p_bad_to_good", c.harvest.p_bad_to_good);
    r.read("p_good_to_bad", c.harvest.p_good_to_bad);
    r.read("sigma2", c.harvest.sigma2);
    r.read("mu", c.harvest.mu);
    r.read("mu_bar", c.harvest.mu_bar);
    r.read("max_inflow", c.harvest.max_inflow);
    r.finish();
    // A raw mean alone replaces the default normalised one.
    if (c.harvest.mu && !root["harvest"].contains("mu_bar")) c.harvest.mu_bar.reset();
  }
  {
    SectionReader r(root, "battery");
    r.read("capacity", c.battery.capacity);
    r.read("capacity_bar", c.battery.capacity_bar);
    r.finish();
    if (c.battery.capacity && !root["battery"].contains("capacity_bar")) {
      c.battery.capacity_bar.reset();
    }
  }
  {
    SectionReader r(root, "solver");
    r.read("epsilon", c.solver.epsilon);
    r.read("max_iterations", c.solver.max_iterations);
    std::string dp_cost = to_string(c.solver.dp_planning_cost);
    r.read("dp_planning_cost", dp_cost);
    if (dp_cost == "source") {
      c.solver.dp_planning_cost = DpPlanningCost::kSourceDistortion;
    } else if (dp_cost == "expected") {
      c.solver.dp_planning_cost = DpPlanningCost::kExpectedDistortion;
    } else {
      throw ConfigError("solver.dp_planning_cost must be \"source\" or \"expected\"");
    }
    r.finish();
  }
  {
    SectionReader r(root, "sim");
    r.read("horizon", c.sim.horizon);
    r.read("seed", c.sim.seed);
    r.finish();
  }
  return c;
}

std::string config_to_json(const SystemConfig& c) {
  json root;
  root["source"] = {{"a", c.source.a},   {"b", c.source.b},   {"d_fl", c.source.d_fl},
                    {"m", c.source.m},   {"l0", c.source.l0}, {"s", c.source.s}};
  root["link"] = {{"p_tx", c.link.p_tx}, {"distance", c.link.distance},
                  {"d0", c.link.d0},     {"eta", c.link.eta},
                  {"f0", c.link.f0},     {"noise_psd_dbm_hz", c.link.noise_psd_dbm_hz},
                  {"bandwidth", c.link.bandwidth}};
  root["energy"] = {{"e0", c.energy.e0},
                    {"alpha_p", c.energy.alpha_p},
                    {"beta_p", c.energy.beta_p},
                    {"eta_a", c.energy.eta_a},
                    {"beta_s", c.energy.beta_s},
                    {"beta_c", c.energy.beta_c},
                    {"beta_e", c.energy.beta_e},
                    {"circuit_rate", c.energy.circuit_rate},
                    {"t_slot", c.energy.t_slot},
                    {"quantum", c.energy.quantum}};
  json harvest = {{"p_bad_to_good", c.harvest.p_bad_to_good},
                  {"p_good_to_bad", c.harvest.p_good_to_bad},
                  {"sigma2", c.harvest.sigma2}};
  if (c.harvest.mu) harvest["mu"] = *c.harvest.mu;
  harvest["mu_bar"] = c.harvest.mu_bar ? json(*c.harvest.mu_bar) : json(nullptr);
  if (c.harvest.max_inflow) harvest["max_inflow"] = *c.harvest.max_inflow;
  root["harvest"] = harvest;
  json battery = json::object();
  if (c.battery.capacity) battery["capacity"] = *c.battery.capacity;
  battery["capacity_bar"] = c.battery.capacity_bar ? json(*c.battery.capacity_bar) : json(nullptr);
  root["battery"] = battery;
  root["solver"] = {{"epsilon", c.solver.epsilon},
                    {"max_iterations", c.solver.max_iterations},
                    {"dp_planning_cost", to_string(c.solver.dp_planning_cost)}};
  root["sim"] = {{"horizon", c.sim.horizon}, {"seed", c.sim.seed}};
  return root.dump(2);
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return config_from_json(buffer.str());
}

}  // namespace ehdist
