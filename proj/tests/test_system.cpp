#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "ehdist/errors.hpp"
#include "ehdist/system.hpp"

using namespace ehdist;

TEST_CASE("default config resolves against e_max") {
  const System s = resolve(SystemConfig{});
  CHECK(s.energy_table.e_max() == 41);
  CHECK(s.capacity == 62);  // round(1.5 * 41)
  CHECK(s.harvest.mu == doctest::Approx(41.0));
  CHECK(s.harvest.max_inflow == 47);  // ceil(41 + 3 sqrt(3))
  CHECK(s.warnings.empty());
  CHECK(s.snr == doctest::Approx(760.315622029607).epsilon(1e-9));
}

TEST_CASE("normalised and raw quantities") {
  SystemConfig c;
  SUBCASE("normalised mean and capacity") {
    const System s = resolve(c.with_mu_bar(0.5).with_capacity_bar(2.0));
    CHECK(s.harvest.mu == doctest::Approx(20.5));
    CHECK(s.capacity == 82);
  }
  SUBCASE("raw wins on conflict with a warning") {
    c.harvest.mu = 7.0;
    c.battery.capacity = 30;
    const System s = resolve(c);
    CHECK(s.harvest.mu == doctest::Approx(7.0));
    CHECK(s.capacity == 30);
    CHECK(s.warnings.size() == 2);
  }
  SUBCASE("consistent raw and normalised values do not warn") {
    c.battery.capacity = 62;
    CHECK(resolve(c).warnings.empty());
  }
  SUBCASE("capacity capped truncation bound") {
    c.battery.capacity = 5;
    c.battery.capacity_bar.reset();
    CHECK(resolve(c).harvest.max_inflow == 5);
  }
}

TEST_CASE("invalid configs name the violated invariant") {
  SystemConfig c;
  c.source.l0 = 2.0 * c.source.s;
  CHECK_THROWS_WITH_AS(resolve(c), doctest::Contains("l0"), UnsupportedConfigError);

  c = SystemConfig{};
  c.harvest.p_good_to_bad = 0.0;
  CHECK_THROWS_WITH_AS(resolve(c), doctest::Contains("harvest.p_good_to_bad"), ConfigError);

  c = SystemConfig{};
  c.battery.capacity_bar = -1.0;
  CHECK_THROWS_WITH_AS(resolve(c), doctest::Contains("capacity_bar"), ConfigError);

  c = SystemConfig{};
  c.solver.epsilon = 0.0;
  CHECK_THROWS_WITH_AS(resolve(c), doctest::Contains("epsilon"), ConfigError);
}

TEST_CASE("JSON config parsing") {
  SUBCASE("empty document gives the defaults") { CHECK(config_from_json("{}") == SystemConfig{}); }
  SUBCASE("sections override fields") {
    const SystemConfig c = config_from_json(R"({"link": {"distance": 80}, "battery": {"capacity_bar": 2.0},
      "solver": {"epsilon": 1e-8, "dp_planning_cost": "expected"}, "sim": {"seed": 42}})");
    CHECK(c.link.distance == 80.0);
    CHECK(*c.battery.capacity_bar == 2.0);
    CHECK(c.solver.epsilon == 1e-8);
    CHECK(c.solver.dp_planning_cost == DpPlanningCost::kExpectedDistortion);
    CHECK(c.sim.seed == 42);
  }
  SUBCASE("raw value alone replaces the normalised default") {
    const SystemConfig c = config_from_json(R"({"harvest": {"mu": 3.5}, "battery": {"capacity": 9}})");
    CHECK_FALSE(c.harvest.mu_bar.has_value());
    CHECK_FALSE(c.battery.capacity_bar.has_value());
    CHECK(resolve(c).warnings.empty());
  }
  SUBCASE("unknown keys and sections are errors") {
    CHECK_THROWS_WITH_AS(config_from_json(R"({"link": {"distanse": 80}})"), doctest::Contains("link.distanse"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(config_from_json(R"({"radio": {}})"), doctest::Contains("radio"), ConfigError);
  }
  SUBCASE("type errors and malformed documents") {
    CHECK_THROWS_AS(config_from_json(R"({"source": {"m": "twenty"}})"), ConfigError);
    CHECK_THROWS_AS(config_from_json("{"), ConfigError);
    CHECK_THROWS_AS(config_from_json("[]"), ConfigError);
    CHECK_THROWS_AS(config_from_json(R"({"solver": {"dp_planning_cost": "psychic"}})"), ConfigError);
  }
}

TEST_CASE("config round trip is the identity") {
  SystemConfig c;
  CHECK(config_from_json(config_to_json(c)) == c);
  c.harvest.mu = 12.0;
  c.harvest.mu_bar.reset();
  c.harvest.max_inflow = 20;
  c.battery.capacity = 17;
  c.battery.capacity_bar.reset();
  c.link.distance = 321.5;
  c.source.a = 0.4123456789012345;
  c.solver.dp_planning_cost = DpPlanningCost::kExpectedDistortion;
  c.sim.seed = 0xFFFFFFFFFFull;
  CHECK(config_from_json(config_to_json(c)) == c);
  const std::string text = config_to_json(c);
  CHECK(config_to_json(config_from_json(text)) == text);
}

TEST_CASE("config files") {
  const char* path = "test_system_config.json";
  {
    std::ofstream out(path);
    out << R"({"link": {"distance": 250}})";
  }
  CHECK(load_config(path).link.distance == 250.0);
  std::remove(path);
  CHECK_THROWS_AS(load_config("definitely/not/here.json"), ConfigError);
}
