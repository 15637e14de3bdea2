#pragma once

#include <vector>

#include "ehdist/model.hpp"

namespace ehdist {

/// Compression energy E0 * l0 * (alpha_p k/m + beta_p) for 1 <= k <= m-1,
/// zero for k in {0, m}. Joules.
double processing_energy(int k, const SourceFit& fit, const ConsumptionParams& params);

/// p_tx * T / eta_a when a packet is sent (k > 0), zero otherwise. Joules.
double transmission_energy(int k, double p_tx, const ConsumptionParams& params);

/// beta_s + beta_c, plus beta_e + circuit_rate * T when a packet is sent.
double circuitry_energy(int k, const ConsumptionParams& params);

/// Sum of the three contributions, in joules.
double total_energy(int k, const SourceFit& fit, double p_tx, const ConsumptionParams& params);

/// total_energy rounded up to whole quanta.
int total_energy_quanta(int k, const SourceFit& fit, double p_tx, const ConsumptionParams& params);

/// Quantised energy demand of every level k = 0..m.
struct EnergyTable {
  std::vector<int> quanta;

  int levels() const { return static_cast<int>(quanta.size()) - 1; }
  int at(int k) const { return quanta.at(static_cast<std::size_t>(k)); }
  /// Largest demand over all levels (attained at k = m-1).
  int e_max() const;
  /// Smallest demand of a level that actually sends (attained at k = m).
  int e_min() const;
};

EnergyTable energy_table(const SourceFit& fit, double p_tx, const ConsumptionParams& params);

/// Distribution of harvested quanta over {0..max_inflow} given the source
/// state. x = 0 is a point mass at 0; x = 1 is a Gaussian renormalised on
/// {1..max_inflow}. A good state with mu <= 0 harvests nothing.
std::vector<double> harvest_pmf(int x, const HarvestModel& model);

/// Truncation bound ceil(mu + 3 sigma), capped at the battery capacity and
/// never below 1.
int default_max_inflow(double mu, double sigma2, int capacity);

/// min(b + e - u, capacity). Throws CausalityError when u > b.
int battery_step(int b, int e, int u, int capacity);

/// Battery level and capacity, both in quanta.
class Battery {
 public:
  Battery(int capacity, int level);

  int capacity() const { return capacity_; }
  int level() const { return level_; }
  bool empty() const { return level_ == 0; }

  /// Spends u, then stores e (harvest-store-use). Returns the new level.
  int step(int e, int u);

 private:
  int capacity_;
  int level_;
};

}  // namespace ehdist
