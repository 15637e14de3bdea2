#pragma once

// Physical and statistical parameters of the reporting device. Every other
// module reads these; none of them mutate.

namespace ehdist {

/// Experimental rate-distortion fit of the lossy compressor and the packet
/// geometry. A packet compressed to level k carries (k/m) * l0 bits in a slot
/// that fits s bits.
struct SourceFit {
  double a = 0.69;
  double b = 3.27;
  double d_fl = 1.0;  ///< distortion of a dropped (or lost) packet
  int m = 20;
  double l0 = 8192.0;  ///< uncompressed payload, bits
  double s = 8192.0;   ///< slot capacity, bits

  void validate() const;
  bool operator==(const SourceFit&) const = default;
};

/// Log-distance path loss link with Rayleigh block fading.
struct LinkModel {
  double p_tx = 0.025118864315095794;  ///< W (14 dBm)
  double distance = 100.0;             ///< m
  double d0 = 1.0;                     ///< far-field reference distance, m
  double eta = 3.5;                    ///< path-loss exponent
  double f0 = 868.3e6;                 ///< Hz
  double noise_psd_dbm_hz = -167.0;
  double bandwidth = 125e3;  ///< Hz

  void validate() const;
  bool operator==(const LinkModel&) const = default;
};

/// Per-slot energy consumption model. All energies in joules.
struct ConsumptionParams {
  double e0 = 1e-9;      ///< J per micro-controller clock cycle
  double alpha_p = 24.0;  ///< cycles/bit, slope in the compression ratio
  double beta_p = 2.0;    ///< cycles/bit, offset
  double eta_a = 0.6;     ///< power amplifier efficiency
  double beta_s = 20e-6;  ///< sensing
  double beta_c = 10e-6;  ///< mode switching and synchronisation
  double beta_e = 0.0;    ///< channel encoding
  double circuit_rate = 5e-3;  ///< W, radio circuitry while transmitting
  double t_slot = 8e-3;        ///< s
  double quantum = 15e-6;      ///< J per energy quantum

  void validate() const;
  bool operator==(const ConsumptionParams&) const = default;
};

/// Two-state Markov energy source. The bad state (x = 0) harvests nothing;
/// the good state (x = 1) harvests a discretised Gaussian on {1..max_inflow}.
struct HarvestModel {
  double p_bad_to_good = 0.3;
  double p_good_to_bad = 0.1;
  double mu = 0.0;      ///< quanta per slot in the good state
  double sigma2 = 3.0;  ///< quanta^2
  int max_inflow = 1;   ///< truncation bound E, quanta

  void validate() const;
  bool operator==(const HarvestModel&) const = default;
};

inline constexpr int kBadState = 0;
inline constexpr int kGoodState = 1;

}  // namespace ehdist
