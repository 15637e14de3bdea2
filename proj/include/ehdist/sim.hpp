#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "ehdist/policies.hpp"
#include "ehdist/system.hpp"

namespace ehdist {

struct TraceRecord {
  long slot = 0;
  int x = 0;
  int e = 0;
  int b_before = 0;
  int u = 0;
  int k = 0;
  bool outage = false;
  double distortion = 0.0;
  int b_after = 0;

  bool operator==(const TraceRecord&) const = default;
};

struct SimReport {
  long horizon = 0;
  double mean_distortion = 0.0;
  double half_width = 0.0;  ///< 95% batch-means half-width
  double empty_fraction = 0.0;
};

struct SimOptions {
  long horizon = 500;
  std::uint64_t seed = 1;
  int initial_battery = -1;  ///< -1: full battery
  int initial_source = kGoodState;
  bool record_trace = true;
};

struct SimResult {
  std::vector<TraceRecord> trace;
  SimReport report;
};

/// Independent random substreams of one replication. The source and harvest
/// streams do not depend on the controller, so two controllers simulated with
/// the same seed see the same energy arrivals.
class SimStreams {
 public:
  explicit SimStreams(std::uint64_t seed);

  double source_uniform() { return next(source_); }
  double harvest_uniform() { return next(harvest_); }
  double channel_uniform() { return next(channel_); }

 private:
  static double next(std::mt19937_64& engine);

  std::mt19937_64 source_;
  std::mt19937_64 harvest_;
  std::mt19937_64 channel_;
};

/// Slot-by-slot closed loop: action, channel draw, harvest, battery update,
/// source transition. Throws CausalityError if the controller overspends.
SimResult simulate(const System& system, const Controller& controller, const SimOptions& options);

struct BatteryStats {
  int min = 0;
  int max = 0;
  double mean = 0.0;
  double empty_fraction = 0.0;         ///< slots starting with b = 0
  double empty_in_bad_fraction = 0.0;  ///< among bad-source slots
};

BatteryStats battery_trace_stats(const std::vector<TraceRecord>& trace);

/// CSV with header slot,x,e,b_before,u,k,outage,distortion,b_after.
void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace);

}  // namespace ehdist
