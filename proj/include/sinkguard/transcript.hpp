#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sinkguard/detector.hpp"
#include "sinkguard/messages.hpp"
#include "sinkguard/scenario.hpp"
#include "sinkguard/topology.hpp"

namespace sinkguard {

/// Exactly one per emitted data packet.
struct PacketFate {
  NodeId src = kNoNode;
  std::uint64_t seq = 0;
  SimTime emitted_at{};
  std::optional<SimTime> delivered_at;
  std::optional<DropReason> drop_reason;
  NodeId last_holder = kNoNode;
  std::uint32_t hops = 0;

  bool delivered() const { return delivered_at.has_value(); }
};

/// A non-benign verdict. Benign verdicts are only counted.
struct VerdictRecord {
  SimTime time{};
  NodeId receiver = kNoNode;
  NodeId sender = kNoNode;
  VerdictKind kind = VerdictKind::Benign;
  std::optional<std::uint32_t> dv_rank;
  std::optional<std::uint32_t> di_rank;
  std::optional<double> apt_value;
  std::optional<double> threshold;
};

enum class TraceKind {
  DioSent,
  DioReceived,
  DioIgnored,
  HelloSent,
  DataEmitted,
  DataForwarded,
  DataDelivered,
  DataDropped,
  ReportSent,
  ReportForwarded,
  ReportQueued,
  ReportDropped,
  ReportArrived,
  BroadcastSent,
  BroadcastApplied,
  ParentChanged,
  Blacklisted,
  Verdict,
  Moved,
};

const char* to_string(TraceKind k);

/// One line of the optional event log. Field meaning depends on kind:
/// `peer` is the other node involved, `a`/`b` carry ranks, counts or ids.
struct TraceRecord {
  SimTime time{};
  std::uint64_t seq = 0;
  TraceKind kind = TraceKind::DioSent;
  NodeId node = kNoNode;
  NodeId peer = kNoNode;
  std::int64_t a = 0;
  std::int64_t b = 0;
};

struct RunStats {
  std::uint64_t events_processed = 0;
  std::uint64_t dio_sent = 0;
  std::uint64_t malicious_dio_sent = 0;
  std::uint64_t dio_received = 0;
  std::uint64_t benign_dio_verdicts = 0;
  std::uint64_t malicious_rank_verdicts = 0;
  std::uint64_t flood_checks = 0;
  std::uint64_t malicious_flood_verdicts = 0;
  std::uint64_t hello_sent = 0;
  std::uint64_t rreq_emitted = 0;
  std::uint64_t reports_sent = 0;
  std::uint64_t reports_arrived = 0;
  std::uint64_t reports_dropped = 0;
  std::uint64_t broadcasts = 0;
};

struct RunTranscript {
  ScenarioConfig config;
  NodeId root_id = kNoNode;
  std::vector<Role> roles;
  std::vector<PacketFate> fates;
  std::vector<VerdictRecord> verdicts;
  std::vector<TraceRecord> events;  // empty unless recording was requested
  std::map<NodeId, SimTime> root_blacklist;  // suspect -> time the root learned it
  std::map<NodeId, SimTime> first_local_detection;
  std::vector<Rank> final_ranks;
  std::vector<NodeId> final_parents;  // kNoNode for the root and orphans
  std::vector<std::vector<NodeId>> final_blacklists;
  RunStats stats;

  std::uint64_t sent() const { return fates.size(); }
  std::uint64_t delivered() const;
  std::array<std::uint64_t, kDropReasonCount> drops_by_reason() const;
};

/// Verdict log: `time_s,receiver,sender,kind,dv_rank,di_rank,apt_value,threshold`.
void write_verdict_csv(std::ostream& out, const RunTranscript& t);

/// Newline-delimited JSON: a header record, one record per event, then one
/// record per packet fate.
void write_trace(std::ostream& out, const RunTranscript& t);

}  // namespace sinkguard
