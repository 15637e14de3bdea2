#include "ehdist/sim.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "ehdist/errors.hpp"

namespace ehdist {
namespace {

constexpr std::uint32_t kSourceStream = 1;
constexpr std::uint32_t kHarvestStream = 2;
constexpr std::uint32_t kChannelStream = 3;
constexpr int kBatches = 100;
constexpr double kZ95 = 1.959963984540054;

std::mt19937_64 make_engine(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream};
  return std::mt19937_64(seq);
}

int sample(const std::vector<double>& cdf, double v) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), v);
  return static_cast<int>(std::min<std::ptrdiff_t>(it - cdf.begin(),
                                                   static_cast<std::ptrdiff_t>(cdf.size()) - 1));
}

}  // namespace

SimStreams::SimStreams(std::uint64_t seed)
    : source_(make_engine(seed, kSourceStream)),
      harvest_(make_engine(seed, kHarvestStream)),
      channel_(make_engine(seed, kChannelStream)) {}

double SimStreams::next(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

SimResult simulate(const System& system, const Controller& controller, const SimOptions& options) {
  if (options.horizon < 1) throw DomainError("horizon must be >= 1");
  if (controller.capacity() != system.capacity) {
    throw DomainError("controller was built for a different battery capacity");
  }
  const int capacity = system.capacity;
  const SourceFit& fit = system.source;

  std::array<std::vector<double>, 2> cdf;
  for (int x = 0; x < 2; ++x) {
    const auto pmf = harvest_pmf(x, system.harvest);
    cdf[x].resize(pmf.size());
    std::partial_sum(pmf.begin(), pmf.end(), cdf[x].begin());
  }
  std::vector<double> outage(static_cast<std::size_t>(fit.m) + 1);
  std::vector<double> distortion(static_cast<std::size_t>(fit.m) + 1);
  for (int k = 0; k <= fit.m; ++k) {
    outage[static_cast<std::size_t>(k)] = outage_probability(k, fit, system.snr);
    distortion[static_cast<std::size_t>(k)] = source_distortion(k, fit);
  }
  const double leave[2] = {system.harvest.p_bad_to_good, system.harvest.p_good_to_bad};

  SimStreams streams(options.seed);
  int x = options.initial_source;
  if (x != kBadState && x != kGoodState) throw DomainError("initial source state must be 0 or 1");
  int b = options.initial_battery < 0 ? capacity : options.initial_battery;
  if (b > capacity) throw DomainError("initial battery exceeds capacity");

  SimResult result;
  if (options.record_trace) result.trace.reserve(static_cast<std::size_t>(options.horizon));

  const long batches = std::min<long>(kBatches, options.horizon);
  const long batch_size = options.horizon / batches;
  std::vector<double> batch_sum(static_cast<std::size_t>(batches), 0.0);

  double total = 0.0;
  long empty_slots = 0;
  for (long n = 0; n < options.horizon; ++n) {
    TraceRecord rec;
    rec.slot = n;
    rec.x = x;
    rec.b_before = b;
    rec.u = controller.action(x, b);
    rec.k = controller.level(rec.u);

    // Every stream advances once per slot whatever the controller does.
    const double channel_draw = streams.channel_uniform();
    const double harvest_draw = streams.harvest_uniform();
    const double source_draw = streams.source_uniform();

    rec.outage = rec.k > 0 && channel_draw < outage[static_cast<std::size_t>(rec.k)];
    rec.distortion = (rec.k == 0 || rec.outage) ? fit.d_fl : distortion[static_cast<std::size_t>(rec.k)];
    rec.e = sample(cdf[x], harvest_draw);
    rec.b_after = battery_step(b, rec.e, rec.u, capacity);

    total += rec.distortion;
    if (b == 0) ++empty_slots;
    const long batch = n / batch_size;
    if (batch < batches) batch_sum[static_cast<std::size_t>(batch)] += rec.distortion;
    if (options.record_trace) result.trace.push_back(rec);

    b = rec.b_after;
    if (source_draw < leave[x]) x = 1 - x;
  }

  SimReport& report = result.report;
  report.horizon = options.horizon;
  report.mean_distortion = total / static_cast<double>(options.horizon);
  report.empty_fraction = static_cast<double>(empty_slots) / static_cast<double>(options.horizon);
  if (batches > 1) {
    double mean = 0.0;
    for (double& s : batch_sum) {
      s /= static_cast<double>(batch_size);
      mean += s;
    }
    mean /= static_cast<double>(batches);
    double var = 0.0;
    for (const double s : batch_sum) var += (s - mean) * (s - mean);
    var /= static_cast<double>(batches - 1);
    report.half_width = kZ95 * std::sqrt(var / static_cast<double>(batches));
  }
  return result;
}

BatteryStats battery_trace_stats(const std::vector<TraceRecord>& trace) {
  if (trace.empty()) throw DomainError("trace must not be empty");
  BatteryStats stats;
  stats.min = trace.front().b_before;
  stats.max = trace.front().b_before;
  double sum = 0.0;
  long empty = 0;
  long bad = 0;
  long empty_bad = 0;
  for (const auto& rec : trace) {
    stats.min = std::min(stats.min, rec.b_before);
    stats.max = std::max(stats.max, rec.b_before);
    sum += rec.b_before;
    if (rec.b_before == 0) ++empty;
    if (rec.x == kBadState) {
      ++bad;
      if (rec.b_before == 0) ++empty_bad;
    }
  }
  const auto n = static_cast<double>(trace.size());
  stats.mean = sum / n;
  stats.empty_fraction = static_cast<double>(empty) / n;
  stats.empty_in_bad_fraction = bad > 0 ? static_cast<double>(empty_bad) / static_cast<double>(bad) : 0.0;
  return stats;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace) {
  out << "slot,x,e,b_before,u,k,outage,distortion,b_after\n";
  char buffer[64];
  for (const auto& r : trace) {
    std::snprintf(buffer, sizeof buffer, "%.10g", r.distortion);
    out << r.slot << ',' << r.x << ',' << r.e << ',' << r.b_before << ',' << r.u << ',' << r.k << ','
        << (r.outage ? 1 : 0) << ',' << buffer << ',' << r.b_after << '\n';
  }
}

}  // namespace ehdist
