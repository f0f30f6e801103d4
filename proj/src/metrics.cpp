#include "sinkguard/metrics.hpp"

namespace sinkguard {

namespace {

void require_traffic(std::span<const TrafficCounts> runs) {
  if (runs.empty()) throw Error(ErrorCode::NoTraffic, "no runs");
  for (const auto& r : runs)
    if (r.sent == 0) throw Error(ErrorCode::NoTraffic, "a run sent no packets");
}

}  // namespace

double pdr(std::span<const TrafficCounts> runs) {
  require_traffic(runs);
  double sum = 0.0;
  for (const auto& r : runs)
    sum += 100.0 * static_cast<double>(r.received) / static_cast<double>(r.sent);
  return sum / static_cast<double>(runs.size());
}

double plr(std::span<const TrafficCounts> runs) {
  require_traffic(runs);
  double sum = 0.0;
  for (const auto& r : runs)
    sum += 100.0 * static_cast<double>(r.sent - r.received) / static_cast<double>(r.sent);
  return sum / static_cast<double>(runs.size());
}

DetectionRates detection_rates(const ConfusionMatrix& cm) {
  DetectionRates out;
  if (const auto attackers = cm.tp + cm.fn; attackers > 0) {
    out.dr_pct = 100.0 * static_cast<double>(cm.tp) / static_cast<double>(attackers);
    out.fnr_pct = 100.0 * static_cast<double>(cm.fn) / static_cast<double>(attackers);
  }
  if (const auto benign = cm.fp + cm.tn; benign > 0)
    out.fpr_pct = 100.0 * static_cast<double>(cm.fp) / static_cast<double>(benign);
  return out;
}

double throughput_kbps(std::span<const std::uint64_t> delivered_per_run,
                       std::uint32_t packet_size_bytes, double start_s, double stop_s) {
  if (!(stop_s > start_s)) throw Error(ErrorCode::ZeroDuration, "stop time must follow start time");
  if (delivered_per_run.empty()) return 0.0;
  double sum = 0.0;
  for (auto a : delivered_per_run)
    sum += static_cast<double>(a) * packet_size_bytes / (stop_s - start_s) * (8.0 / 1000.0);
  return sum / static_cast<double>(delivered_per_run.size());
}

ConfusionMatrix confusion_matrix(const RunTranscript& t) {
  ConfusionMatrix cm;
  for (NodeId v = 0; v < t.roles.size(); ++v) {
    const bool flagged = t.root_blacklist.contains(v);
    if (t.roles[v] != Role::Benign)
      ++(flagged ? cm.tp : cm.fn);
    else
      ++(flagged ? cm.fp : cm.tn);
  }
  return cm;
}

TrafficCounts traffic_counts(const RunTranscript& t) { return {t.sent(), t.delivered()}; }

double throughput_kbps(const RunTranscript& t) {
  const std::uint64_t delivered[] = {t.delivered()};
  return throughput_kbps(delivered, t.config.packet_size_bytes, 0.0, t.config.duration_s);
}

MetricsReport compute_metrics(const RunTranscript& t) {
  MetricsReport m;
  m.cm = confusion_matrix(t);
  m.traffic = traffic_counts(t);
  const auto rates = detection_rates(m.cm);
  m.dr_pct = rates.dr_pct;
  m.fnr_pct = rates.fnr_pct;
  m.fpr_pct = rates.fpr_pct;
  if (m.traffic.sent > 0) {
    const TrafficCounts one[] = {m.traffic};
    m.pdr_pct = pdr(one);
    m.plr_pct = plr(one);
  } else {
    m.pdr_pct = 0.0;
    m.plr_pct = 100.0;
  }
  m.throughput_kbps = t.config.duration_s > 0 ? throughput_kbps(t) : 0.0;
  return m;
}

}  // namespace sinkguard
