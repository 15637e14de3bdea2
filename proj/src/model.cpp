#include "ehdist/model.hpp"

#include <cmath>
#include <string>

#include "ehdist/errors.hpp"

namespace ehdist {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }
bool non_negative(double v) { return std::isfinite(v) && v >= 0.0; }
bool open_unit(double v) { return v > 0.0 && v < 1.0; }

}  // namespace

void SourceFit::validate() const {
  require(open_unit(a), "source.a must lie in (0, 1)");
  require(positive(b), "source.b must be > 0");
  require(positive(d_fl), "source.d_fl must be > 0");
  require(m >= 2, "source.m must be >= 2");
  require(positive(l0), "source.l0 must be > 0");
  require(positive(s), "source.s must be > 0");
}

void LinkModel::validate() const {
  require(positive(p_tx), "link.p_tx must be > 0");
  require(positive(distance), "link.distance must be > 0");
  require(positive(d0), "link.d0 must be > 0");
  require(distance >= d0, "link.distance must be >= link.d0");
  require(positive(eta), "link.eta must be > 0");
  require(positive(f0), "link.f0 must be > 0");
  require(std::isfinite(noise_psd_dbm_hz), "link.noise_psd_dbm_hz must be finite");
  require(positive(bandwidth), "link.bandwidth must be > 0");
}

void ConsumptionParams::validate() const {
  require(positive(e0), "energy.e0 must be > 0");
  require(positive(alpha_p), "energy.alpha_p must be > 0");
  require(non_negative(beta_p), "energy.beta_p must be >= 0");
  require(eta_a > 0.0 && eta_a <= 1.0, "energy.eta_a must lie in (0, 1]");
  require(non_negative(beta_s), "energy.beta_s must be >= 0");
  require(non_negative(beta_c), "energy.beta_c must be >= 0");
  require(non_negative(beta_e), "energy.beta_e must be >= 0");
  require(non_negative(circuit_rate), "energy.circuit_rate must be >= 0");
  require(positive(t_slot), "energy.t_slot must be > 0");
  require(positive(quantum), "energy.quantum must be > 0");
}

void HarvestModel::validate() const {
  require(open_unit(p_bad_to_good), "harvest.p_bad_to_good must lie in (0, 1)");
  require(open_unit(p_good_to_bad), "harvest.p_good_to_bad must lie in (0, 1)");
  require(std::isfinite(mu) && mu >= 0.0, "harvest.mu must be >= 0");
  require(positive(sigma2), "harvest.sigma2 must be > 0");
  require(max_inflow >= 1, "harvest.max_inflow must be >= 1");
}

}  // namespace ehdist
