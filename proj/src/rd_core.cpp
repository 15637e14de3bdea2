#include "ehdist/rd_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ehdist/errors.hpp"

namespace ehdist {
namespace {

constexpr double kSpeedOfLight = 2.998e8;  // m/s

void check_level(int k, const SourceFit& fit) {
  if (k < 0 || k > fit.m) {
    throw DomainError("compression level " + std::to_string(k) + " outside [0, " +
                      std::to_string(fit.m) + "]");
  }
}

// 2^r - 1 without cancellation for small r.
double pow2m1(double r) { return std::expm1(r * std::numbers::ln2); }

}  // namespace

double source_distortion(int k, const SourceFit& fit) {
  check_level(k, fit);
  if (k == 0) return fit.d_fl;
  return fit.b * (std::pow(static_cast<double>(k) / fit.m, -fit.a) - 1.0);
}

double coding_rate(int k, const SourceFit& fit) {
  check_level(k, fit);
  return static_cast<double>(k) / fit.m * (fit.l0 / fit.s);
}

double avg_snr(const LinkModel& link) {
  const double path_coeff = 4.0 * std::numbers::pi * link.d0 * link.f0 / kSpeedOfLight;
  const double noise_w = std::pow(10.0, link.noise_psd_dbm_hz / 10.0) * 1e-3 * link.bandwidth;
  return link.p_tx / (path_coeff * path_coeff * std::pow(link.distance / link.d0, link.eta) * noise_w);
}

double outage_probability(int k, const SourceFit& fit, double snr) {
  const double rate = coding_rate(k, fit);
  if (rate == 0.0) return 0.0;
  return -std::expm1(-pow2m1(rate) / snr);
}

double outage_probability(int k, const SourceFit& fit, const LinkModel& link) {
  return outage_probability(k, fit, avg_snr(link));
}

double expected_distortion(int k, const SourceFit& fit, double snr) {
  if (k == 0) return fit.d_fl;
  const double p_out = outage_probability(k, fit, snr);
  return source_distortion(k, fit) * (1.0 - p_out) + fit.d_fl * p_out;
}

double expected_distortion(int k, const SourceFit& fit, const LinkModel& link) {
  return expected_distortion(k, fit, avg_snr(link));
}

double expected_distortion_continuous(double w, const SourceFit& fit, double snr) {
  if (!(w >= 1.0 && w <= fit.m)) throw DomainError("continuous level outside [1, m]");
  const double distortion = fit.b * (std::pow(w / fit.m, -fit.a) - 1.0);
  const double p_out = -std::expm1(-pow2m1(w * fit.l0 / (fit.m * fit.s)) / snr);
  return distortion * (1.0 - p_out) + fit.d_fl * p_out;
}

RdCoefficients rd_coefficients(const SourceFit& fit, double snr) {
  RdCoefficients c;
  c.a = fit.a;
  c.m = fit.m;
  c.exp_inv_snr = std::exp(1.0 / snr);
  c.c2 = 1.0 / snr;
  c.c3 = fit.l0 / (fit.m * fit.s);
  c.c1_scaled = fit.b * std::pow(static_cast<double>(fit.m), fit.a);
  c.c4_scaled = fit.b + fit.d_fl;
  c.d1_scaled = fit.a * c.c1_scaled;
  c.d2_scaled = c.c1_scaled * c.c2 * c.c3 * std::numbers::ln2;
  c.d3_scaled = c.c2 * c.c3 * c.c4_scaled * std::numbers::ln2;

  c.c1 = c.c1_scaled * c.exp_inv_snr;
  c.c4 = c.c4_scaled * c.exp_inv_snr;
  c.d1 = fit.a * c.c1;
  c.d2 = c.c1 * c.c2 * c.c3 * std::numbers::ln2;
  c.d3 = c.c2 * c.c3 * c.c4 * std::numbers::ln2;
  c.d4 = c.exp_inv_snr * c.c2 * c.c3 * std::numbers::ln2;
  return c;
}

double derivative_sign(double w, const RdCoefficients& coeffs) {
  if (!(w >= 1.0 && w <= coeffs.m)) throw DomainError("continuous level outside [1, m]");
  const double growth = std::exp2(w * coeffs.c3);
  const double scaled = coeffs.d1_scaled * std::pow(w, -coeffs.a - 1.0) +
                        coeffs.d2_scaled * std::pow(w, -coeffs.a) * growth -
                        coeffs.d3_scaled * growth;
  if (scaled == 0.0) return 0.0;
  if (std::isinf(coeffs.exp_inv_snr)) return std::copysign(coeffs.exp_inv_snr, scaled);
  return scaled * coeffs.exp_inv_snr;
}

double g_root(const SourceFit& fit) {
  return fit.m * std::pow(fit.b / (fit.b + fit.d_fl), 1.0 / fit.a);
}

double continuous_minimizer(const SourceFit& fit, double snr) {
  const RdCoefficients coeffs = rd_coefficients(fit, snr);
  double lo = 1.0;
  double hi = static_cast<double>(fit.m);
  if (derivative_sign(lo, coeffs) <= 0.0) return lo;
  if (derivative_sign(hi, coeffs) >= 0.0) return hi;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (derivative_sign(mid, coeffs) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

KrResult solve_k_r_detailed(const SourceFit& fit, double snr) {
  fit.validate();
  if (fit.l0 > fit.s) {
    throw UnsupportedConfigError("inner solver requires l0 <= s (got l0=" +
                                 std::to_string(fit.l0) + ", s=" + std::to_string(fit.s) + ")");
  }
  const RdCoefficients coeffs = rd_coefficients(fit, snr);
  const double f_first = derivative_sign(1.0, coeffs);
  const double f_last = derivative_sign(static_cast<double>(fit.m), coeffs);
  auto expected = [&](int k) { return expected_distortion(k, fit, snr); };

  KrResult result;
  if (f_first <= 0.0 && f_last <= 0.0) {
    result.regime = RdRegime::kOutageDominated;
    result.k = 1;
    result.w_star = 1.0;
    return result;
  }
  if (f_first >= 0.0 && f_last >= 0.0) {
    result.regime = RdRegime::kDistortionDominated;
    result.k = fit.m;
    result.w_star = fit.m;
    return result;
  }
  if (f_first < 0.0) {
    // f increasing somewhere on [1, m]; not reachable when l0 <= s.
    result.regime = RdRegime::kIrregular;
    result.k = 1;
    for (int k = 2; k <= fit.m; ++k) {
      if (expected(k) < expected(result.k)) result.k = k;
    }
    result.w_star = result.k;
    return result;
  }

  result.regime = RdRegime::kInterior;
  result.w_star = continuous_minimizer(fit, snr);

  // f > 0 below the zero of g, so the minimiser is not below it. Seed with
  // whichever neighbour of that zero has the lower expected distortion.
  const double w_g = g_root(fit);
  const int below = std::clamp(static_cast<int>(std::floor(w_g)), 1, fit.m);
  const int above = std::clamp(static_cast<int>(std::ceil(w_g)), 1, fit.m);
  result.k_g = expected(above) < expected(below) ? above : below;

  // First k in [k_g, m] where the forward difference stops decreasing.
  int lo = result.k_g;
  int hi = fit.m;
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (expected(mid + 1) >= expected(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  result.k = lo;
  return result;
}

int solve_k_r(const SourceFit& fit, double snr) { return solve_k_r_detailed(fit, snr).k; }

int solve_k_r(const SourceFit& fit, const LinkModel& link) {
  return solve_k_r(fit, avg_snr(link));
}

int solve_k_e(int u, const EnergyTable& energy) {
  if (u <= 0) return 0;
  const int m = energy.levels();
  for (int k = m - 1; k >= 1; --k) {
    if (energy.at(k) <= u) return k;
  }
  return 0;
}

RdSolver::RdSolver(const SourceFit& fit, double snr, EnergyTable energy)
    : fit_(fit), snr_(snr), energy_(std::move(energy)), k_r_(solve_k_r(fit, snr)) {
  if (energy_.levels() != fit.m) throw DomainError("energy table does not match source.m");
  expected_.reserve(static_cast<std::size_t>(fit.m) + 1);
  for (int k = 0; k <= fit.m; ++k) expected_.push_back(expected_distortion(k, fit, snr));
}

double RdSolver::expected(int k) const {
  if (k < 0 || k > fit_.m) throw DomainError("compression level outside [0, m]");
  return expected_[static_cast<std::size_t>(k)];
}

RdSolution RdSolver::solve(int u) const {
  // Candidates in increasing k; a later one must be strictly better to win.
  int best = 0;
  auto consider = [&](int k) {
    if (k > 0 && expected_[static_cast<std::size_t>(k)] < expected_[static_cast<std::size_t>(best)]) {
      best = k;
    }
  };
  if (u > 0) {
    consider(std::min(k_r_, solve_k_e(u, energy_)));
    // Sending uncompressed is the cheapest way to send at all, so it stays a
    // candidate even when compressed levels beyond k_E are out of reach.
    if (energy_.at(fit_.m) <= u) consider(fit_.m);
  }
  RdSolution solution;
  solution.k = best;
  solution.rate = coding_rate(best, fit_);
  solution.expected_distortion = expected_[static_cast<std::size_t>(best)];
  solution.energy_feasible = energy_.at(k_r_) <= u;
  return solution;
}

RdSolution solve_k_star(int u, const SourceFit& fit, const LinkModel& link,
                        const ConsumptionParams& params) {
  return RdSolver(fit, avg_snr(link), energy_table(fit, link.p_tx, params)).solve(u);
}

}  // namespace ehdist
