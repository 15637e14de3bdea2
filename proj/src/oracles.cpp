#include "ehdist/oracles.hpp"

#include <algorithm>
#include <cmath>

#include "ehdist/errors.hpp"

namespace ehdist::oracle {
namespace {

// Written out again rather than calling rd_core, so a slip there shows up.
double expected(int k, const SourceFit& fit, double snr) {
  if (k == 0) return fit.d_fl;
  const double ratio = static_cast<double>(k) / fit.m;
  const double distortion = fit.b * (std::pow(ratio, -fit.a) - 1.0);
  const double rate = ratio * fit.l0 / fit.s;
  const double p_out = 1.0 - std::exp(-(std::pow(2.0, rate) - 1.0) / snr);
  return distortion * (1.0 - p_out) + fit.d_fl * p_out;
}

using Matrix = std::vector<std::vector<double>>;

Matrix multiply(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size();
  Matrix c(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t l = 0; l < n; ++l) {
      if (a[i][l] == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][l] * b[l][j];
    }
  }
  return c;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

Argmin brute_k_r(const SourceFit& fit, double snr) {
  Argmin best{1, expected(1, fit, snr)};
  for (int k = 2; k <= fit.m; ++k) {
    const double v = expected(k, fit, snr);
    if (v < best.value) best = {k, v};
  }
  return best;
}

Argmin brute_k_star(int u, const SourceFit& fit, double snr, const EnergyTable& energy) {
  Argmin best{0, fit.d_fl};
  for (int k = 1; k <= fit.m; ++k) {
    if (energy.at(k) > u) continue;
    const double v = expected(k, fit, snr);
    if (v < best.value) best = {k, v};
  }
  return best;
}

bool attains(int k, const Argmin& best, const std::function<double(int)>& objective) {
  if (k == best.k) return true;
  const double v = objective(k);
  return std::abs(v - best.value) <= 1e-12 * std::max(1.0, std::abs(best.value));
}

int derivative_sign_changes(const SourceFit& fit, double snr, int points) {
  const double a = fit.a;
  const double c2 = 1.0 / snr;
  const double c3 = fit.l0 / (fit.m * fit.s);
  const double c1 = fit.b * std::pow(fit.m, a);
  const double c4 = fit.b + fit.d_fl;
  // dE/dw of E(w) = exp(1/snr) exp(-c2 2^(w c3)) (c1 w^-a - c4) + d_fl, with
  // the positive factor exp(1/snr) dropped.
  int changes = 0;
  int last = 0;
  for (int i = 0; i < points; ++i) {
    const double w = 1.0 + (fit.m - 1.0) * i / (points - 1.0);
    const double t = std::pow(2.0, w * c3);
    const double slope = -a * c1 * std::pow(w, -a - 1.0) -
                         (c1 * std::pow(w, -a) - c4) * c2 * t * std::log(2.0) * c3;
    const int sign = slope > 0.0 ? 1 : (slope < 0.0 ? -1 : 0);
    if (sign == 0) continue;
    if (last != 0 && sign != last) ++changes;
    last = sign;
  }
  return changes;
}

double long_run_cost(const MdpModel& model, const std::vector<int>& action) {
  const int n = model.num_states();
  Matrix lazy(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int i = 0; i < n; ++i) {
    const State s = model.state(i);
    const int u = action.at(static_cast<std::size_t>(i));
    if (u < 0 || u > s.b) throw CausalityError("policy spends more than the battery holds");
    for (int x = 0; x < 2; ++x) {
      const double px = model.source_transition(s.x, x);
      const auto& pmf = model.harvest_pmf(s.x);
      for (std::size_t e = 0; e < pmf.size(); ++e) {
        const int b = std::min(s.b - u + static_cast<int>(e), model.capacity());
        lazy[static_cast<std::size_t>(i)][static_cast<std::size_t>(model.index(x, b))] +=
            0.5 * px * pmf[e];
      }
    }
    lazy[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] += 0.5;
  }
  // 2^64 steps is far past mixing for any chain this oracle is meant for.
  for (int step = 0; step < 64; ++step) {
    Matrix next = multiply(lazy, lazy);
    // Rounding in the row sums would otherwise compound with every squaring.
    for (auto& row : next) {
      double total = 0.0;
      for (const double p : row) total += p;
      for (double& p : row) p /= total;
    }
    double change = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        change = std::max(change, std::abs(next[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                                           lazy[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]));
      }
    }
    lazy = std::move(next);
    if (change < 1e-14) break;
  }
  const auto& row = lazy[static_cast<std::size_t>(model.index(kGoodState, model.capacity()))];
  double cost = 0.0;
  for (int j = 0; j < n; ++j) {
    cost += row[static_cast<std::size_t>(j)] *
            model.cost(action[static_cast<std::size_t>(j)]);
  }
  return cost;
}

EnumerationResult enumerate_policies(const MdpModel& model, long max_policies) {
  const int n = model.num_states();
  long count = 1;
  for (int i = 0; i < n; ++i) {
    count *= model.state(i).b + 1;
    if (count > max_policies) throw DomainError("too many policies to enumerate");
  }
  EnumerationResult result;
  result.policies = count;
  std::vector<int> action(static_cast<std::size_t>(n), 0);
  bool first = true;
  while (true) {
    const double gain = long_run_cost(model, action);
    if (first || gain < result.best_gain) {
      result.best_gain = gain;
      result.best_action = action;
      first = false;
    }
    // Odometer over u(s) in {0..b(s)}.
    int i = 0;
    for (; i < n; ++i) {
      auto& u = action[static_cast<std::size_t>(i)];
      if (u < model.state(i).b) {
        ++u;
        break;
      }
      u = 0;
    }
    if (i == n) break;
  }
  return result;
}

RandomRdCase random_rd_case(std::mt19937_64& rng) {
  RandomRdCase c;
  c.fit.a = uniform(rng, 0.1, 0.95);
  c.fit.b = uniform(rng, 0.2, 8.0);
  c.fit.d_fl = uniform(rng, 0.3, 3.0);
  c.fit.m = std::uniform_int_distribution<int>(2, 40)(rng);
  c.fit.s = std::uniform_int_distribution<int>(256, 16384)(rng);
  c.fit.l0 = std::max(1.0, std::floor(c.fit.s * uniform(rng, 0.02, 1.0)));
  c.snr = std::pow(10.0, uniform(rng, -1.0, 4.0));

  ConsumptionParams params;
  params.e0 = std::pow(10.0, uniform(rng, -10.0, -8.0));
  params.alpha_p = uniform(rng, 1.0, 40.0);
  params.beta_p = uniform(rng, 0.0, 5.0);
  params.beta_s = uniform(rng, 0.0, 30e-6);
  params.beta_c = uniform(rng, 0.0, 30e-6);
  params.circuit_rate = uniform(rng, 0.0, 10e-3);
  params.quantum = uniform(rng, 5e-6, 60e-6);
  const double p_tx = std::pow(10.0, uniform(rng, -3.0, -1.3));
  c.energy = energy_table(c.fit, p_tx, params);
  return c;
}

MdpModel random_tiny_model(std::mt19937_64& rng) {
  const int capacity = std::uniform_int_distribution<int>(1, 3)(rng);
  const int inflow = std::uniform_int_distribution<int>(1, 2)(rng);
  std::array<std::vector<double>, 2> pmf;
  pmf[kBadState].assign(static_cast<std::size_t>(inflow) + 1, 0.0);
  pmf[kBadState][0] = 1.0;
  pmf[kGoodState].assign(static_cast<std::size_t>(inflow) + 1, 0.0);
  double total = 0.0;
  for (int e = 1; e <= inflow; ++e) {
    pmf[kGoodState][static_cast<std::size_t>(e)] = uniform(rng, 0.05, 1.0);
    total += pmf[kGoodState][static_cast<std::size_t>(e)];
  }
  for (auto& p : pmf[kGoodState]) p /= total;

  const double p_bg = uniform(rng, 0.05, 0.95);
  const double p_gb = uniform(rng, 0.05, 0.95);
  std::array<std::array<double, 2>, 2> kernel{{{1.0 - p_bg, p_bg}, {p_gb, 1.0 - p_gb}}};

  // Non-increasing in the energy spent, starting from the drop cost.
  std::vector<double> cost(static_cast<std::size_t>(capacity) + 1);
  cost[0] = uniform(rng, 0.5, 2.0);
  for (int u = 1; u <= capacity; ++u) {
    cost[static_cast<std::size_t>(u)] = cost[static_cast<std::size_t>(u) - 1] * uniform(rng, 0.2, 1.0);
  }
  return MdpModel(capacity, std::move(pmf), kernel, std::move(cost));
}

}  // namespace ehdist::oracle
