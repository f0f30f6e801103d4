#pragma once

#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "sinkguard/messages.hpp"
#include "sinkguard/rpl.hpp"

namespace sinkguard {

// ---------------------------------------------------------------------------
// Rank anomaly rule

/// |parent_rank - node_rank|, fixed when the routing table is built or updated.
std::uint32_t compute_dv_rank(Rank node_rank, Rank parent_rank);

/// DV-RANK for a routing state. Throws NoParent for the root or an orphan.
std::uint32_t compute_dv_rank(const RoutingState& state, const NeighborRanks& neighbor_ranks);

/// |sender_advertised_rank - node_rank| for an incoming DIO.
std::uint32_t compute_di_rank(Rank node_rank, Rank sender_advertised_rank);

/// DV-RANK assumed by a node that has no parent (including the root): the
/// value every node holds under hop-count ranks.
inline constexpr std::uint32_t kDefaultDvRank = 1;

struct RankEvidence {
  std::optional<std::uint32_t> dv_rank;
  std::uint32_t di_rank = 0;
  NodeId sender_id = kNoNode;
  NodeId receiver_id = kNoNode;
  SimTime time{};
};

struct FloodEvidence {
  NodeId sender_id = kNoNode;
  NodeId receiver_id = kNoNode;
  double apt_value = 0.0;
  double threshold = 0.0;
  SimTime time{};
};

enum class VerdictKind { Benign, MaliciousRank, MaliciousFlood };

const char* to_string(VerdictKind k);

struct Verdict {
  VerdictKind kind = VerdictKind::Benign;
  std::optional<RankEvidence> rank;
  std::optional<FloodEvidence> flood;

  bool malicious() const { return kind != VerdictKind::Benign; }
};

/// MaliciousRank iff di_rank > dv_rank. Throws MissingDvRank if dv is unset.
Verdict classify_dio(const RankEvidence& evidence);

// ---------------------------------------------------------------------------
// APT-RREQ flood detector

/// One smoothing step s' = s + alpha * (x - s). Equal to alpha*x + (1-alpha)*s
/// but exact for alpha = 1 and for x == s, and clamped to [min(s,x), max(s,x)].
double ewma_step(double previous, double sample, double alpha);

struct AptTrack {
  double s = 0.0;
  std::uint64_t t = 0;  // samples seen
};

struct AptState {
  double alpha = 0.5;
  std::map<NodeId, AptTrack> per_neighbor;
};

/// Feeds one period's RREQ count for `neighbor`; the first sample seeds the
/// average. Returns the new value. Throws InvalidAlpha.
double update_apt_rreq(AptState& state, NodeId neighbor, double x);

/// MaliciousFlood iff the neighbor's APT-RREQ exceeds `threshold`.
/// Throws UnknownNeighbor when no sample exists for it.
Verdict check_flooding(const AptState& state, NodeId neighbor, double threshold);

/// Two smoothing tracks per neighbor plus the warm-up samples used to derive
/// the adaptive threshold.
struct FloodMonitor {
  AptState low;   // slow track, logged
  AptState high;  // verdict track
  std::vector<double> warmup_samples;
  std::optional<double> threshold;
};

FloodMonitor make_flood_monitor(double alpha_low, double alpha_high);

/// Feeds a Hello into both tracks. During warm-up the count is also kept for
/// threshold calibration.
void ingest_hello(FloodMonitor& monitor, const HelloMessage& hello, bool in_warmup);

/// mean + k * population stddev; +inf for an empty sample.
double adaptive_threshold(std::span<const double> samples, double k);

// ---------------------------------------------------------------------------
// Reporting and dissemination

/// Per-reporter duplicate suppression and the queue of reports waiting for a
/// parent.
struct ReportOutbox {
  std::set<NodeId> reported;
  std::deque<MaliciousReport> pending;
};

/// A fresh report, or nothing if this reporter already reported the suspect.
std::optional<MaliciousReport> report_to_root(ReportOutbox& outbox, NodeId suspect,
                                              NodeId reporter);

/// Reports waiting at an orphaned holder, released once it has a parent again.
std::deque<MaliciousReport> take_pending(ReportOutbox& outbox, bool has_parent);

/// Root-side blacklist with the broadcast sequence counter.
struct RootRegistry {
  std::set<NodeId> suspects;
  std::uint32_t sequence = 0;
};

/// Adds suspects to the root's blacklist. Returns a broadcast when the set grew;
/// nothing for an empty or already-known set.
std::optional<BlacklistBroadcast> root_broadcast(RootRegistry& registry,
                                                 const std::vector<NodeId>& suspects);

/// Per-node duplicate filter for broadcasts. True if the broadcast is new.
bool accept_broadcast(std::uint32_t& last_sequence, const BlacklistBroadcast& b);

}  // namespace sinkguard
