#pragma once

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include "sinkguard/types.hpp"

namespace sinkguard {

/// Rank advertisement. The advertised rank is whatever the sender claims.
struct DioMessage {
  NodeId sender_id = kNoNode;
  Rank advertised_rank{};
  SimTime emission_time{};
  bool malicious = false;  // set by the attacker model, for the trace only
};

/// Periodic neighbor beacon carrying the sender's RREQ count for the last
/// hello period.
struct HelloMessage {
  NodeId sender_id = kNoNode;
  std::uint32_t rreq_count = 0;
};

struct MaliciousReport {
  NodeId suspect = kNoNode;
  NodeId reporter = kNoNode;
  std::uint32_t hops = 0;
};

/// Root-originated, sequence-numbered flood carrying the root's full blacklist.
struct BlacklistBroadcast {
  std::uint32_t sequence = 0;
  std::shared_ptr<const std::vector<NodeId>> suspects;
};

struct DataPacket {
  NodeId src = kNoNode;
  std::uint64_t seq = 0;   // global emission index, also the fate index
  SimTime emitted_at{};
  std::uint32_t hops = 0;
  bool corrupt = false;
};

enum class DropReason { NoParent, Sinkhole, Altered, Ttl, Timeout };

inline constexpr int kDropReasonCount = 5;

const char* to_string(DropReason r);

using ControlMessage =
    std::variant<DioMessage, HelloMessage, MaliciousReport, BlacklistBroadcast>;

using Message = std::variant<DioMessage, HelloMessage, MaliciousReport, BlacklistBroadcast,
                             DataPacket>;

}  // namespace sinkguard
