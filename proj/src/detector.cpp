#include "sinkguard/detector.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace sinkguard {

namespace {

std::uint32_t abs_diff(std::uint32_t a, std::uint32_t b) { return a > b ? a - b : b - a; }

}  // namespace

const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Benign: return "benign";
    case VerdictKind::MaliciousRank: return "malicious_rank";
    case VerdictKind::MaliciousFlood: return "malicious_flood";
  }
  return "unknown";
}

std::uint32_t compute_dv_rank(Rank node_rank, Rank parent_rank) {
  return abs_diff(parent_rank.value, node_rank.value);
}

std::uint32_t compute_dv_rank(const RoutingState& state, const NeighborRanks& neighbor_ranks) {
  if (!state.parent_id || state.my_rank.infinite())
    throw Error(ErrorCode::NoParent, "node " + std::to_string(state.self) + " has no parent");
  const auto it = neighbor_ranks.find(*state.parent_id);
  if (it == neighbor_ranks.end())
    throw Error(ErrorCode::NoParent, "parent of node " + std::to_string(state.self) + " not in view");
  return compute_dv_rank(state.my_rank, it->second);
}

std::uint32_t compute_di_rank(Rank node_rank, Rank sender_advertised_rank) {
  return abs_diff(sender_advertised_rank.value, node_rank.value);
}

Verdict classify_dio(const RankEvidence& evidence) {
  if (!evidence.dv_rank)
    throw Error(ErrorCode::MissingDvRank,
                "receiver " + std::to_string(evidence.receiver_id) + " has no DV-RANK");
  Verdict v;
  v.kind = evidence.di_rank > *evidence.dv_rank ? VerdictKind::MaliciousRank : VerdictKind::Benign;
  v.rank = evidence;
  return v;
}

double ewma_step(double previous, double sample, double alpha) {
  if (alpha == 1.0) return sample;
  const double s = previous + alpha * (sample - previous);
  return std::clamp(s, std::min(previous, sample), std::max(previous, sample));
}

double update_apt_rreq(AptState& state, NodeId neighbor, double x) {
  if (!(state.alpha > 0.0 && state.alpha <= 1.0))
    throw Error(ErrorCode::InvalidAlpha, "alpha must be in (0,1]");
  if (!(x >= 0.0)) throw Error(ErrorCode::InvalidConfig, "negative RREQ count");
  auto& track = state.per_neighbor[neighbor];
  track.s = track.t == 0 ? x : ewma_step(track.s, x, state.alpha);
  ++track.t;
  return track.s;
}

Verdict check_flooding(const AptState& state, NodeId neighbor, double threshold) {
  const auto it = state.per_neighbor.find(neighbor);
  if (it == state.per_neighbor.end() || it->second.t == 0)
    throw Error(ErrorCode::UnknownNeighbor, "no APT-RREQ sample for node " + std::to_string(neighbor));
  Verdict v;
  v.kind = it->second.s > threshold ? VerdictKind::MaliciousFlood : VerdictKind::Benign;
  v.flood = FloodEvidence{neighbor, kNoNode, it->second.s, threshold, SimTime{}};
  return v;
}

FloodMonitor make_flood_monitor(double alpha_low, double alpha_high) {
  FloodMonitor m;
  m.low.alpha = alpha_low;
  m.high.alpha = alpha_high;
  return m;
}

void ingest_hello(FloodMonitor& monitor, const HelloMessage& hello, bool in_warmup) {
  const double x = hello.rreq_count;
  update_apt_rreq(monitor.low, hello.sender_id, x);
  update_apt_rreq(monitor.high, hello.sender_id, x);
  if (in_warmup) monitor.warmup_samples.push_back(x);
}

double adaptive_threshold(std::span<const double> samples, double k) {
  if (samples.empty()) return std::numeric_limits<double>::infinity();
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(samples.size());
  double var = 0.0;
  for (double x : samples) var += (x - mean) * (x - mean);
  var /= static_cast<double>(samples.size());
  return mean + k * std::sqrt(var);
}

std::optional<MaliciousReport> report_to_root(ReportOutbox& outbox, NodeId suspect,
                                              NodeId reporter) {
  if (!outbox.reported.insert(suspect).second) return std::nullopt;
  return MaliciousReport{suspect, reporter, 0};
}

std::deque<MaliciousReport> take_pending(ReportOutbox& outbox, bool has_parent) {
  if (!has_parent) return {};
  return std::exchange(outbox.pending, {});
}

std::optional<BlacklistBroadcast> root_broadcast(RootRegistry& registry,
                                                 const std::vector<NodeId>& suspects) {
  bool grew = false;
  for (NodeId s : suspects) grew |= registry.suspects.insert(s).second;
  if (!grew) return std::nullopt;
  ++registry.sequence;
  auto list = std::make_shared<std::vector<NodeId>>(registry.suspects.begin(),
                                                    registry.suspects.end());
  return BlacklistBroadcast{registry.sequence, std::move(list)};
}

bool accept_broadcast(std::uint32_t& last_sequence, const BlacklistBroadcast& b) {
  if (b.sequence <= last_sequence) return false;
  last_sequence = b.sequence;
  return true;
}

}  // namespace sinkguard
