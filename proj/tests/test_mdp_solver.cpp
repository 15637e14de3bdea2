#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "ehdist/errors.hpp"
#include "ehdist/mdp.hpp"
#include "ehdist/oracles.hpp"

using namespace ehdist;

namespace {

MdpModel two_level_model(std::vector<double> costs) {
  const int capacity = static_cast<int>(costs.size()) - 1;
  std::array<std::vector<double>, 2> pmf{std::vector<double>{1.0, 0.0}, std::vector<double>{0.0, 1.0}};
  std::array<std::array<double, 2>, 2> kernel{{{0.7, 0.3}, {0.1, 0.9}}};
  return MdpModel(capacity, pmf, kernel, std::move(costs));
}

Policy constant_policy(int capacity, int u) {
  Policy p{capacity, {}, "test"};
  for (int x = 0; x < 2; ++x) {
    for (int b = 0; b <= capacity; ++b) p.action.push_back(std::min(b, u));
  }
  return p;
}

}  // namespace

TEST_CASE("transition kernel") {
  const MdpModel model = two_level_model({1.0, 0.5, 0.2});
  SUBCASE("rows are distributions") {
    for (int s = 0; s < model.num_states(); ++s) {
      const State st = model.state(s);
      for (int u = 0; u <= st.b; ++u) {
        const auto row = model.transition(st.x, st.b, u);
        CHECK(std::accumulate(row.begin(), row.end(), 0.0) == doctest::Approx(1.0));
      }
    }
  }
  SUBCASE("good state harvests one quantum, overflow folds onto B") {
    const auto row = model.transition(kGoodState, 2, 0);
    CHECK(row[static_cast<std::size_t>(model.index(kGoodState, 2))] == doctest::Approx(0.9));
    CHECK(row[static_cast<std::size_t>(model.index(kBadState, 2))] == doctest::Approx(0.1));
  }
  SUBCASE("bad state only spends") {
    const auto row = model.transition(kBadState, 2, 1);
    CHECK(row[static_cast<std::size_t>(model.index(kBadState, 1))] == doctest::Approx(0.7));
    CHECK(row[static_cast<std::size_t>(model.index(kGoodState, 1))] == doctest::Approx(0.3));
  }
  CHECK_THROWS_AS(model.transition(kGoodState, 1, 2), CausalityError);
  CHECK(model.state(model.index(1, 2)) == State{1, 2});
}

TEST_CASE("steady-state cost") {
  const MdpModel model = two_level_model({1.0, 0.5, 0.2});
  SUBCASE("constant cost gives that cost") {
    const auto ss = steady_state(model, constant_policy(2, 1), std::vector<double>(6, 0.37));
    CHECK(ss.gain == doctest::Approx(0.37));
    CHECK(std::accumulate(ss.distribution.begin(), ss.distribution.end(), 0.0) == doctest::Approx(1.0));
  }
  SUBCASE("never spending drops every packet") {
    CHECK(steady_state_cost(model, constant_policy(2, 0)) == doctest::Approx(1.0));
  }
  SUBCASE("agrees with the independent evaluator") {
    for (int u = 0; u <= 2; ++u) {
      const Policy p = constant_policy(2, u);
      CHECK(steady_state_cost(model, p) == doctest::Approx(oracle::long_run_cost(model, p.action)).epsilon(1e-10));
    }
  }
}

TEST_CASE("steady state with several closed classes starts from the full good state") {
  // No harvest at all: b never grows, and b = 0 is absorbing under any policy.
  std::array<std::vector<double>, 2> pmf{std::vector<double>{1.0}, std::vector<double>{1.0}};
  std::array<std::array<double, 2>, 2> kernel{{{0.5, 0.5}, {0.5, 0.5}}};
  const MdpModel model(3, pmf, kernel, {1.0, 0.6, 0.4, 0.1});
  const Policy hold = constant_policy(3, 0);
  const auto ss = steady_state(model, hold);
  CHECK(ss.multichain);
  CHECK(ss.gain == doctest::Approx(1.0));
  const Policy spend = constant_policy(3, 1);
  CHECK(steady_state_cost(model, spend) == doctest::Approx(1.0));
}

TEST_CASE("relative value iteration") {
  const MdpModel model = two_level_model({1.0, 0.5, 0.2});
  const MdpSolution sol = rvia_solve(model, {1e-9, 100000, {kGoodState, -1}});
  CHECK(sol.final_span <= 1e-9);
  CHECK(sol.iterations > 0);
  CHECK(sol.gain == doctest::Approx(oracle::enumerate_policies(model).best_gain).epsilon(1e-8));
  CHECK(sol.gain == doctest::Approx(steady_state_cost(model, sol.policy)).epsilon(1e-8));
  for (int x = 0; x < 2; ++x) {
    for (int b = 0; b <= 2; ++b) CHECK(sol.policy.at(x, b) <= b);
  }
  CHECK(sol.relative_values[static_cast<std::size_t>(model.index(kGoodState, 2))] == 0.0);

  SUBCASE("reference state does not move the gain") {
    const MdpSolution other = rvia_solve(model, {1e-9, 100000, {kBadState, 0}});
    CHECK(other.gain == doctest::Approx(sol.gain).epsilon(1e-8));
    CHECK(other.policy.action == sol.policy.action);
  }
  SUBCASE("iteration cap") {
    CHECK_THROWS_AS(rvia_solve(model, {1e-300, 3, {kGoodState, -1}}), ConvergenceError);
    try {
      rvia_solve(model, {1e-300, 3, {kGoodState, -1}});
    } catch (const ConvergenceError& e) {
      CHECK(e.final_span() > 0.0);
    }
  }
  CHECK_THROWS_AS(rvia_solve(model, {0.0, 10, {kGoodState, -1}}), DomainError);
}

TEST_CASE("zero-capacity battery never sends") {
  const MdpModel model = two_level_model({1.0});
  const MdpSolution sol = rvia_solve(model);
  CHECK(sol.gain == doctest::Approx(1.0));
  CHECK(sol.policy.action == std::vector<int>{0, 0});
}

TEST_CASE("ties go to the smaller action") {
  // Spending is free and useless: every action is optimal.
  const MdpModel model = two_level_model({0.5, 0.5, 0.5});
  const MdpSolution sol = rvia_solve(model);
  for (const int u : sol.policy.action) CHECK(u == 0);
}

TEST_CASE("tiny random models match exhaustive policy enumeration") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 60; ++i) {
    const MdpModel model = oracle::random_tiny_model(rng);
    const MdpSolution sol = rvia_solve(model, {1e-6, 100000, {kGoodState, -1}});
    const auto best = oracle::enumerate_policies(model);
    CHECK(std::abs(sol.gain - best.best_gain) <= 1e-5);
    CHECK(std::abs(steady_state_cost(model, sol.policy) - best.best_gain) <= 1e-5);
    CHECK(verify_threshold(sol.policy).pass);
  }
}

TEST_CASE("threshold check") {
  Policy monotone{2, {0, 1, 2, 0, 0, 2}, "t"};
  CHECK(verify_threshold(monotone).pass);
  Policy inverted{2, {0, 1, 1, 0, 1, 0}, "t"};
  const auto report = verify_threshold(inverted);
  CHECK_FALSE(report.pass);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0] == State{1, 1});
}

TEST_CASE("convexity detector") {
  SUBCASE("one level is vacuously convex") { CHECK(verify_convexity(1, {0.0, 5.0, 3.0, -2.0}, 0.0).convex_pass); }
  SUBCASE("convex table passes") {
    CHECK(verify_convexity(3, {4.0, 1.0, 0.0, 1.0, 9.0, 4.0, 1.0, 0.0}, 0.0).convex_pass);
  }
  SUBCASE("a bump fails at that state") {
    const auto report = verify_convexity(3, {0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0}, 1e-9);
    CHECK_FALSE(report.convex_pass);
    CHECK(report.worst_convexity == doctest::Approx(-2.0));
    CHECK(report.convexity_violations.front() == State{0, 1});
  }
}

TEST_CASE("structure of a smooth-cost model") {
  // Convex decreasing cost in u: the textbook setting for the structural results.
  std::array<std::vector<double>, 2> pmf{std::vector<double>{1.0, 0.0, 0.0},
                                         std::vector<double>{0.0, 0.5, 0.5}};
  std::array<std::array<double, 2>, 2> kernel{{{0.7, 0.3}, {0.1, 0.9}}};
  std::vector<double> cost;
  for (int u = 0; u <= 12; ++u) cost.push_back(std::exp(-0.4 * u));
  const MdpModel model(12, pmf, kernel, cost);
  const MdpSolution sol = rvia_solve(model, {1e-10, 100000, {kGoodState, -1}});
  const auto report = verify_structure(model, sol, 1e-8);
  CHECK(report.convex_pass);
  CHECK(report.submodular_pass);
  CHECK(verify_threshold(sol.policy).pass);
}

TEST_CASE("default system solves to a threshold policy") {
  const System system = resolve(SystemConfig{});
  const MdpModel model = build_model(system);
  const MdpSolution sol = rvia_solve(model);
  CHECK(verify_threshold(sol.policy).pass);
  CHECK(sol.gain > 0.0);
  CHECK(sol.gain < system.source.d_fl);
  CHECK(std::abs(sol.gain - steady_state_cost(model, sol.policy)) <= 1e-5);
  const auto costs = optimal_action_costs(system);
  CHECK(costs.front() == doctest::Approx(system.source.d_fl));
  for (std::size_t u = 1; u < costs.size(); ++u) CHECK(costs[u] <= costs[u - 1]);
}

TEST_CASE("solver output satisfies the Bellman equation over every action") {
  std::mt19937_64 rng(77);
  std::vector<MdpModel> models;
  for (int i = 0; i < 20; ++i) models.push_back(oracle::random_tiny_model(rng));
  SystemConfig c;
  models.push_back(build_model(resolve(c.with_capacity_bar(1.5))));
  models.push_back(build_model(resolve(c.with_distance(600.0).with_mu_bar(0.7))));
  for (const auto& model : models) {
    const MdpSolution sol = rvia_solve(model, {1e-9, 100000, {kGoodState, -1}});
    double worst = 0.0;
    for (int s = 0; s < model.num_states(); ++s) {
      const State st = model.state(s);
      const double chosen = model.q_value(sol.relative_values, st.x, st.b, sol.policy.at(st.x, st.b));
      for (int u = 0; u <= st.b; ++u) {
        worst = std::max(worst, chosen - model.q_value(sol.relative_values, st.x, st.b, u));
      }
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("no harvest gives exactly the cost of never sending") {
  SystemConfig c;
  const MdpModel model = build_model(resolve(c.with_mu_bar(0.0)));
  REQUIRE(model.never_harvests());
  CHECK(rvia_solve(model).gain == model.cost(0));
  CHECK_FALSE(build_model(resolve(c)).never_harvests());
}
