#include "ehdist/energy_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ehdist/errors.hpp"

namespace ehdist {
namespace {

void check_level(int k, const SourceFit& fit) {
  if (k < 0 || k > fit.m) {
    throw DomainError("compression level " + std::to_string(k) + " outside [0, " +
                      std::to_string(fit.m) + "]");
  }
}

}  // namespace

double processing_energy(int k, const SourceFit& fit, const ConsumptionParams& params) {
  check_level(k, fit);
  if (k == 0 || k == fit.m) return 0.0;
  const double cycles_per_bit = params.alpha_p * static_cast<double>(k) / fit.m + params.beta_p;
  return params.e0 * fit.l0 * cycles_per_bit;
}

double transmission_energy(int k, double p_tx, const ConsumptionParams& params) {
  return k > 0 ? p_tx * params.t_slot / params.eta_a : 0.0;
}

double circuitry_energy(int k, const ConsumptionParams& params) {
  double energy = params.beta_s + params.beta_c;
  if (k > 0) energy += params.beta_e + params.circuit_rate * params.t_slot;
  return energy;
}

double total_energy(int k, const SourceFit& fit, double p_tx, const ConsumptionParams& params) {
  return processing_energy(k, fit, params) + transmission_energy(k, p_tx, params) +
         circuitry_energy(k, params);
}

int total_energy_quanta(int k, const SourceFit& fit, double p_tx, const ConsumptionParams& params) {
  const double ratio = total_energy(k, fit, p_tx, params) / params.quantum;
  // Absorb rounding noise so that an exact multiple of the quantum is not
  // pushed up by one.
  return static_cast<int>(std::ceil(ratio - 1e-9 * std::max(1.0, ratio)));
}

int EnergyTable::e_max() const { return *std::max_element(quanta.begin(), quanta.end()); }

int EnergyTable::e_min() const {
  return *std::min_element(std::next(quanta.begin()), quanta.end());
}

EnergyTable energy_table(const SourceFit& fit, double p_tx, const ConsumptionParams& params) {
  EnergyTable table;
  table.quanta.reserve(static_cast<std::size_t>(fit.m) + 1);
  for (int k = 0; k <= fit.m; ++k) table.quanta.push_back(total_energy_quanta(k, fit, p_tx, params));
  return table;
}

std::vector<double> harvest_pmf(int x, const HarvestModel& model) {
  if (x != kBadState && x != kGoodState) {
    throw DomainError("source state must be 0 or 1, got " + std::to_string(x));
  }
  std::vector<double> pmf(static_cast<std::size_t>(model.max_inflow) + 1, 0.0);
  if (x == kBadState || model.mu <= 0.0) {
    pmf[0] = 1.0;
    return pmf;
  }
  for (int e = 1; e <= model.max_inflow; ++e) {
    const double z = (e - model.mu);
    pmf[static_cast<std::size_t>(e)] = std::exp(-z * z / (2.0 * model.sigma2));
  }
  const double total = std::accumulate(pmf.begin(), pmf.end(), 0.0);
  if (!(total > 0.0)) {
    // Mean far beyond the truncation bound: all mass sits on the bound.
    std::fill(pmf.begin(), pmf.end(), 0.0);
    pmf.back() = 1.0;
    return pmf;
  }
  for (double& p : pmf) p /= total;
  return pmf;
}

int default_max_inflow(double mu, double sigma2, int capacity) {
  const int bound = static_cast<int>(std::ceil(mu + 3.0 * std::sqrt(sigma2)));
  return std::max(1, std::min(bound, capacity));
}

int battery_step(int b, int e, int u, int capacity) {
  if (u < 0 || e < 0) throw DomainError("energy amounts must be non-negative");
  if (u > b) {
    throw CausalityError("action u=" + std::to_string(u) + " exceeds battery level b=" +
                         std::to_string(b));
  }
  return std::min(b + e - u, capacity);
}

Battery::Battery(int capacity, int level) : capacity_(capacity), level_(level) {
  if (capacity < 0 || level < 0 || level > capacity) {
    throw DomainError("battery level must lie in [0, capacity]");
  }
}

int Battery::step(int e, int u) {
  level_ = battery_step(level_, e, u, capacity_);
  return level_;
}

}  // namespace ehdist
