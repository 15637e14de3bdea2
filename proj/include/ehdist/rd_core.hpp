#pragma once

#include <vector>

#include "ehdist/energy_model.hpp"
#include "ehdist/model.hpp"

namespace ehdist {

/// Source distortion of compression level k: b((k/m)^-a - 1), or d_fl when
/// the packet is dropped (k = 0).
double source_distortion(int k, const SourceFit& fit);

/// Channel coding rate R(k) = (k/m) * (l0/s), bits per channel use.
double coding_rate(int k, const SourceFit& fit);

/// Average received SNR (the |H|^2 = 1 value).
double avg_snr(const LinkModel& link);

/// Rayleigh outage probability 1 - exp(-(2^R(k) - 1)/snr).
double outage_probability(int k, const SourceFit& fit, double snr);
double outage_probability(int k, const SourceFit& fit, const LinkModel& link);

/// D(k)(1 - P_out(k)) + d_fl P_out(k).
double expected_distortion(int k, const SourceFit& fit, double snr);
double expected_distortion(int k, const SourceFit& fit, const LinkModel& link);

/// Continuous extension of expected_distortion to w in [1, m].
double expected_distortion_continuous(double w, const SourceFit& fit, double snr);

/// Closed-form coefficients of the continuous expected distortion
///   E(w) = c1 w^-a exp(-c2 2^(w c3)) - c4 exp(-c2 2^(w c3)) + d_fl
/// and of its derivative E'(w) = -exp(-c2 2^(w c3)) f(w).
///
/// c1, c4, d1, d2, d3, d4 all carry the factor exp(1/snr) and overflow for
/// snr below ~1/700. The `*_scaled` members hold the same quantities with
/// that factor removed, which is what derivative_sign() evaluates.
struct RdCoefficients {
  double a = 0.0;
  int m = 0;
  double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
  double d1 = 0.0, d2 = 0.0, d3 = 0.0, d4 = 0.0;
  double exp_inv_snr = 1.0;
  double c1_scaled = 0.0, c4_scaled = 0.0;
  double d1_scaled = 0.0, d2_scaled = 0.0, d3_scaled = 0.0;
};

RdCoefficients rd_coefficients(const SourceFit& fit, double snr);

/// f(w) = d1 w^(-a-1) + d2 w^-a 2^(w c3) - d3 2^(w c3). Positive means the
/// continuous expected distortion is decreasing at w. Throws DomainError
/// outside [1, m].
double derivative_sign(double w, const RdCoefficients& coeffs);

/// Zero of g(w) = (d2 w^-a - d3) 2^(w c3): m (b / (b + d_fl))^(1/a).
/// Below it f is strictly positive, so the minimiser lies at or above it.
double g_root(const SourceFit& fit);

enum class RdRegime {
  kOutageDominated,      ///< f <= 0 at both ends, distortion increasing: k_R* = 1
  kDistortionDominated,  ///< f >= 0 at both ends, distortion decreasing: k_R* = m
  kInterior,             ///< f(1) > 0 > f(m): single sign change inside (1, m)
  kIrregular,            ///< f(1) < 0 < f(m), impossible for l0 <= s; scanned
};

struct KrResult {
  int k = 0;
  RdRegime regime = RdRegime::kInterior;
  double w_star = 0.0;  ///< continuous minimiser (1 or m at the boundary)
  int k_g = 1;          ///< seed of the discrete search
};

/// Unconstrained inner optimum over {1..m}: case split on the signs of f(1)
/// and f(m), then a binary search over [k_g, m] on the sign of the forward
/// difference. Throws UnsupportedConfigError when l0 > s.
KrResult solve_k_r_detailed(const SourceFit& fit, double snr);
int solve_k_r(const SourceFit& fit, double snr);
int solve_k_r(const SourceFit& fit, const LinkModel& link);

/// Continuous minimiser w_R* of the expected distortion on [1, m], found by
/// bisection on the sign of f.
double continuous_minimizer(const SourceFit& fit, double snr);

/// Result of the inner problem for one energy budget.
struct RdSolution {
  int k = 0;
  double rate = 0.0;
  double expected_distortion = 0.0;
  bool energy_feasible = false;  ///< budget covers the unconstrained optimum k_R*
};

/// Largest level in {1..m-1} affordable with u quanta, 0 when none is (or u = 0).
int solve_k_e(int u, const EnergyTable& energy);

/// Inner problem solver bound to one configuration; caches k_R* and the
/// expected distortion of every level.
class RdSolver {
 public:
  RdSolver(const SourceFit& fit, double snr, EnergyTable energy);

  const SourceFit& fit() const { return fit_; }
  double snr() const { return snr_; }
  const EnergyTable& energy() const { return energy_; }
  int k_r() const { return k_r_; }
  double expected(int k) const;

  /// Distortion-minimising level among those affordable with u quanta.
  RdSolution solve(int u) const;

 private:
  SourceFit fit_;
  double snr_;
  EnergyTable energy_;
  int k_r_;
  std::vector<double> expected_;
};

RdSolution solve_k_star(int u, const SourceFit& fit, const LinkModel& link,
                        const ConsumptionParams& params);

}  // namespace ehdist
