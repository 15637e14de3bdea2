#include <doctest.h>

#include <cmath>
#include <numeric>

#include "ehdist/energy_model.hpp"
#include "ehdist/errors.hpp"

using namespace ehdist;

TEST_CASE("per-slot energy contributions") {
  const SourceFit fit;
  const ConsumptionParams p;
  const double p_tx = LinkModel{}.p_tx;

  CHECK(processing_energy(0, fit, p) == 0.0);
  CHECK(processing_energy(fit.m, fit, p) == 0.0);
  CHECK(processing_energy(10, fit, p) == doctest::Approx(1e-9 * 8192 * (24.0 * 0.5 + 2.0)));
  CHECK(transmission_energy(0, p_tx, p) == 0.0);
  CHECK(transmission_energy(5, p_tx, p) == doctest::Approx(p_tx * 8e-3 / 0.6));
  CHECK(circuitry_energy(0, p) == doctest::Approx(30e-6));
  CHECK(circuitry_energy(3, p) == doctest::Approx(30e-6 + 5e-3 * 8e-3));
  CHECK(total_energy(10, fit, p_tx, p) ==
        doctest::Approx(processing_energy(10, fit, p) + transmission_energy(10, p_tx, p) + circuitry_energy(10, p)));
  CHECK_THROWS_AS(processing_energy(21, fit, p), DomainError);
}

TEST_CASE("quantised demand of the default device") {
  const EnergyTable table = energy_table(SourceFit{}, LinkModel{}.p_tx, ConsumptionParams{});
  const std::vector<int> expected = {2,  29, 30, 31, 31, 32, 33, 33, 34, 34, 35,
                                     36, 36, 37, 38, 38, 39, 40, 40, 41, 27};
  CHECK(table.quanta == expected);
  CHECK(table.levels() == 20);
  CHECK(table.e_max() == 41);
  CHECK(table.e_min() == 27);
  // Compression costs grow with k, so the demand never falls below k = 1..m-1.
  for (int k = 1; k + 1 < table.levels(); ++k) CHECK(table.at(k + 1) >= table.at(k));
}

TEST_CASE("exact multiples of the quantum are not rounded up") {
  SourceFit fit;
  ConsumptionParams p;
  p.beta_s = 0.0;
  p.beta_c = 0.0;
  p.circuit_rate = 0.0;
  p.t_slot = 0.01;
  p.eta_a = 1.0;
  p.quantum = 1e-4;
  CHECK(total_energy_quanta(fit.m, fit, 0.03, p) == 3);
  CHECK(total_energy_quanta(fit.m, fit, 0.0300001, p) == 4);
}

TEST_CASE("harvest distribution") {
  HarvestModel h;
  h.mu = 4.0;
  h.sigma2 = 3.0;
  h.max_inflow = 10;

  SUBCASE("bad state harvests nothing") {
    const auto pmf = harvest_pmf(kBadState, h);
    CHECK(pmf.size() == 11);
    CHECK(pmf[0] == 1.0);
    CHECK(std::accumulate(pmf.begin(), pmf.end(), 0.0) == doctest::Approx(1.0));
  }
  SUBCASE("good state is a truncated Gaussian on 1..E") {
    const auto pmf = harvest_pmf(kGoodState, h);
    CHECK(pmf[0] == 0.0);
    CHECK(std::accumulate(pmf.begin(), pmf.end(), 0.0) == doctest::Approx(1.0));
    CHECK(pmf[4] > pmf[3]);
    CHECK(pmf[4] > pmf[5]);
    CHECK(pmf[3] == doctest::Approx(pmf[5]));
    CHECK(pmf[5] / pmf[4] == doctest::Approx(std::exp(-1.0 / 6.0)));
  }
  SUBCASE("zero mean harvests nothing in either state") {
    h.mu = 0.0;
    CHECK(harvest_pmf(kGoodState, h)[0] == 1.0);
  }
  SUBCASE("mean far above the bound piles onto the bound") {
    h.mu = 1e6;
    h.sigma2 = 1.0;
    const auto pmf = harvest_pmf(kGoodState, h);
    CHECK(pmf.back() == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(harvest_pmf(2, h), DomainError);
}

TEST_CASE("truncation bound") {
  CHECK(default_max_inflow(4.0, 3.0, 100) == 10);
  CHECK(default_max_inflow(4.0, 3.0, 6) == 6);
  CHECK(default_max_inflow(0.0, 3.0, 0) == 1);
}

TEST_CASE("battery update spends, then stores, then clips") {
  CHECK(battery_step(5, 2, 3, 10) == 4);
  CHECK(battery_step(5, 9, 0, 10) == 10);
  CHECK(battery_step(0, 0, 0, 10) == 0);
  CHECK(battery_step(3, 0, 3, 10) == 0);
  CHECK_THROWS_AS(battery_step(2, 5, 3, 10), CausalityError);

  Battery battery(4, 4);
  CHECK(battery.step(0, 3) == 1);
  CHECK(battery.step(2, 1) == 2);
  CHECK_FALSE(battery.empty());
  CHECK(battery.step(0, 2) == 0);
  CHECK(battery.empty());
  CHECK_THROWS_AS(battery.step(1, 1), CausalityError);
  CHECK_THROWS_AS(Battery(3, 4), DomainError);
}

TEST_CASE("parameter validation names the field") {
  ConsumptionParams p;
  p.eta_a = 0.0;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("eta_a"), ConfigError);
  HarvestModel h;
  h.p_bad_to_good = 1.5;
  CHECK_THROWS_WITH_AS(h.validate(), doctest::Contains("p_bad_to_good"), ConfigError);
  SourceFit f;
  f.a = 1.0;
  CHECK_THROWS_WITH_AS(f.validate(), doctest::Contains("source.a"), ConfigError);
}
