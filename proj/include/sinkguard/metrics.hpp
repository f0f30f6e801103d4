#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sinkguard/transcript.hpp"

namespace sinkguard {

/// Node-level detection outcome, judged by the root's blacklist at run end.
struct ConfusionMatrix {
  std::uint64_t tp = 0;  // attackers blacklisted
  std::uint64_t fn = 0;  // attackers never blacklisted
  std::uint64_t fp = 0;  // benign nodes blacklisted
  std::uint64_t tn = 0;  // benign nodes never blacklisted
};

/// Per-run traffic totals.
struct TrafficCounts {
  std::uint64_t sent = 0;
  std::uint64_t received = 0;
};

/// nullopt marks a rate whose denominator is zero.
struct DetectionRates {
  std::optional<double> dr_pct;
  std::optional<double> fnr_pct;
  std::optional<double> fpr_pct;
};

struct MetricsReport {
  ConfusionMatrix cm;
  TrafficCounts traffic;
  std::optional<double> dr_pct;
  std::optional<double> fnr_pct;
  std::optional<double> fpr_pct;
  double pdr_pct = 0.0;
  double plr_pct = 0.0;
  double throughput_kbps = 0.0;
};

/// Mean over runs of 100 * received / sent. Throws NoTraffic if any run sent
/// nothing or the list is empty.
double pdr(std::span<const TrafficCounts> runs);

/// Mean over runs of 100 * (sent - received) / sent.
double plr(std::span<const TrafficCounts> runs);

DetectionRates detection_rates(const ConfusionMatrix& cm);

/// Mean over runs of delivered * packet_size * 8/1000 / (stop - start), kbps.
/// Throws ZeroDuration when stop <= start.
double throughput_kbps(std::span<const std::uint64_t> delivered_per_run,
                       std::uint32_t packet_size_bytes, double start_s, double stop_s);

ConfusionMatrix confusion_matrix(const RunTranscript& t);
TrafficCounts traffic_counts(const RunTranscript& t);
double throughput_kbps(const RunTranscript& t);

/// All metrics for one run. A run without traffic reports PDR 0 and PLR 100.
MetricsReport compute_metrics(const RunTranscript& t);

}  // namespace sinkguard
