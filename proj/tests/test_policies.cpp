#include <doctest.h>

#include "ehdist/errors.hpp"
#include "ehdist/policies.hpp"

using namespace ehdist;

namespace {

System comparison_system(double mu_bar) {
  SystemConfig c;
  c.link.distance = 80.0;
  return resolve(c.with_mu_bar(mu_bar).with_capacity_bar(1.5));
}

// Channel so good that outage never matters to double precision.
System zero_outage_system(double mu_bar) {
  SystemConfig c;
  c.link.noise_psd_dbm_hz = -400.0;
  return resolve(c.with_mu_bar(mu_bar));
}

}  // namespace

TEST_CASE("greedy action") {
  CHECK(greedy_action(50, 27) == 27);
  CHECK(greedy_action(27, 27) == 27);
  CHECK(greedy_action(10, 27) == 10);
  CHECK(greedy_action(0, 27) == 0);
  const System s = resolve(SystemConfig{});
  CHECK(greedy_target(s) == s.energy_table.at(s.source.m));
  const Controller gp = gp_solve(s);
  CHECK(gp.kind() == ControllerKind::kGreedy);
  CHECK(gp.policy().tag == "GP");
  CHECK(gp.level(gp.action(kBadState, 0)) == 0);
  for (int x = 0; x < 2; ++x) {
    for (int b = 0; b <= s.capacity; ++b) {
      // Never sits on energy it could use.
      if (b >= greedy_target(s)) CHECK(gp.action(x, b) == greedy_target(s));
    }
  }
}

TEST_CASE("dumb-processing inner level") {
  const SourceFit fit;
  const EnergyTable table = energy_table(fit, LinkModel{}.p_tx, ConsumptionParams{});
  CHECK(dp_inner_k(0, fit, table) == 0);
  CHECK(dp_inner_k(27, fit, table) == fit.m);
  CHECK(dp_inner_k(100, fit, table) == fit.m);
  SUBCASE("mid budget takes the largest affordable level when uncompressed is out of reach") {
    EnergyTable pricey = table;
    pricey.quanta.back() = 1000;
    // D(k) < d_fl only from k = 14 on, so the best level affordable with 36
    // quanta (k = 12) loses to a drop.
    CHECK(dp_inner_k(36, fit, pricey) == 0);
    CHECK(dp_inner_k(38, fit, pricey) == 15);
    CHECK(dp_inner_k(41, fit, pricey) == 19);
  }
}

TEST_CASE("controllers reject acausal tables") {
  Policy bad{1, {0, 1, 0, 2}, "x"};
  CHECK_THROWS_AS(Controller(ControllerKind::kGreedy, bad, {0, 0}), CausalityError);
  Policy fine{1, {0, 1, 0, 1}, "x"};
  CHECK_THROWS_AS(Controller(ControllerKind::kGreedy, fine, {0}), DomainError);
  const Controller c(ControllerKind::kDumbProcessing, fine, {0, 0});
  CHECK(c.policy().tag == "DP");
}

TEST_CASE("optimal policy dominates both heuristics") {
  for (const double mu_bar : {0.0, 0.1, 0.3, 0.6, 1.0, 1.5, 2.5}) {
    CAPTURE(mu_bar);
    const System s = comparison_system(mu_bar);
    const double tol = 10.0 * s.solver.epsilon;
    const auto plan = op_solve(s);
    const double op = evaluate_controller(s, plan.controller);
    CHECK(op == doctest::Approx(plan.solution.gain).epsilon(1e-5));
    CHECK(op <= evaluate_controller(s, gp_solve(s)) + tol);
    CHECK(op <= evaluate_controller(s, dp_solve(s)) + tol);
  }
}

TEST_CASE("greedy is the worst of the three at the comparison setting") {
  const System s = comparison_system(0.5);
  CHECK(evaluate_controller(s, gp_solve(s)) >= evaluate_controller(s, dp_solve(s)));
}

TEST_CASE("without outage the dumb-processing policy is optimal") {
  for (const double mu_bar : {0.2, 0.8}) {
    const System s = zero_outage_system(mu_bar);
    CHECK(outage_probability(s.source.m, s.source, s.snr) < 1e-12);
    const double op = evaluate_controller(s, op_solve(s).controller);
    CHECK(evaluate_controller(s, dp_solve(s)) == doctest::Approx(op).epsilon(1e-9));
  }
}

TEST_CASE("dumb-processing planning cost switch") {
  SystemConfig c;
  c.link.distance = 600.0;
  c.solver.dp_planning_cost = DpPlanningCost::kExpectedDistortion;
  const System s = resolve(c.with_mu_bar(0.5));
  const Controller dp = dp_solve(s);
  CHECK(evaluate_controller(s, op_solve(s).controller) <= evaluate_controller(s, dp) + 1e-5);
  for (int u = 0; u <= s.capacity; ++u) CHECK(dp.level(u) == dp_inner_k(u, s.source, s.energy_table));
}

TEST_CASE("no energy means every controller drops everything") {
  const System s = comparison_system(0.0);
  CHECK(evaluate_controller(s, op_solve(s).controller) == doctest::Approx(s.source.d_fl));
  CHECK(evaluate_controller(s, gp_solve(s)) == doctest::Approx(s.source.d_fl));
  CHECK(evaluate_controller(s, dp_solve(s)) == doctest::Approx(s.source.d_fl));
}
