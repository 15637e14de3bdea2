#pragma once

// Brute-force references used by the tests and the verify command. None of
// these share code paths with the solvers they check.

#include <functional>
#include <random>
#include <vector>

#include "ehdist/energy_model.hpp"
#include "ehdist/mdp.hpp"
#include "ehdist/model.hpp"

namespace ehdist::oracle {

struct Argmin {
  int k = 0;
  double value = 0.0;
};

/// Smallest minimiser of the expected distortion over {1..m}.
Argmin brute_k_r(const SourceFit& fit, double snr);

/// Smallest minimiser over {0..m} restricted to levels whose demand fits u.
Argmin brute_k_star(int u, const SourceFit& fit, double snr, const EnergyTable& energy);

/// True when `k` attains the oracle minimum, allowing ties within a relative
/// 1e-12 of the minimum value.
bool attains(int k, const Argmin& best, const std::function<double(int)>& objective);

/// Sign changes of f on `points` evenly spaced samples of [1, m], computed
/// straight from the unscaled derivative of the expected distortion. Exact
/// zeros are skipped.
int derivative_sign_changes(const SourceFit& fit, double snr, int points = 10000);

/// Long-run average cost from the full-battery good state, evaluated by
/// repeated squaring of the lazy chain (I + P)/2.
double long_run_cost(const MdpModel& model, const std::vector<int>& action);

struct EnumerationResult {
  double best_gain = 0.0;
  std::vector<int> best_action;
  long policies = 0;
};

/// Every stationary deterministic policy of a small model, each evaluated by
/// long_run_cost. Throws DomainError above `max_policies`.
EnumerationResult enumerate_policies(const MdpModel& model, long max_policies = 1000000);

/// Random source fits with l0 <= s and an average SNR between -10 and 40 dB.
struct RandomRdCase {
  SourceFit fit;
  double snr = 1.0;
  EnergyTable energy;
};

RandomRdCase random_rd_case(std::mt19937_64& rng);

/// Random model with capacity <= 3 and at most 2 quanta harvested per slot.
MdpModel random_tiny_model(std::mt19937_64& rng);

}  // namespace ehdist::oracle
