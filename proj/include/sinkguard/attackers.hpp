#pragma once

#include <cstdint>
#include <optional>

#include "sinkguard/messages.hpp"
#include "sinkguard/scenario.hpp"

namespace sinkguard {

/// Rank-lying sinkhole. From attack_start it advertises `advertised_rank`
/// every `attack_interval` and drops or corrupts the data it is handed.
struct SinkholeBehavior {
  Rank advertised_rank{0};
  SinkholeMode data_plane = SinkholeMode::Drop;
  SimTime attack_start{};
  SimTime attack_interval{1'000'000};
};

struct FlooderBehavior {
  double rreq_rate_per_s = 10.0;
  SimTime attack_start{};
};

/// Malicious DIO for `now`, or nothing when `now` precedes the attack or is
/// off the interval grid.
std::optional<DioMessage> sinkhole_emit_dio(const SinkholeBehavior& behavior, NodeId self,
                                            SimTime now);

/// First grid point at or after `t`.
SimTime next_malicious_dio(const SinkholeBehavior& behavior, SimTime t);

enum class SinkholeAction { Dropped, Altered };

/// Drop mode discards; alter mode corrupts the payload and lets it continue.
SinkholeAction sinkhole_handle_data(SinkholeMode mode, DataPacket& packet);
inline SinkholeAction sinkhole_handle_data(const SinkholeBehavior& b, DataPacket& packet) {
  return sinkhole_handle_data(b.data_plane, packet);
}

/// RREQs emitted by a flooder over [from, to): round(rate * overlap with the
/// attack phase).
std::uint32_t flooder_emit_rreqs(const FlooderBehavior& behavior, SimTime from, SimTime to);

/// Deterministic benign RREQ emissions over [from, to) at `rate` per second:
/// floor(rate*to) - floor(rate*from).
std::uint32_t benign_rreq_count(double rate_per_s, SimTime from, SimTime to);

/// Rejects a flooder that is not faster than benign nodes (InvalidConfig).
void check_flooder(const FlooderBehavior& behavior, double benign_rate_per_s);

SinkholeBehavior sinkhole_behavior(const ScenarioConfig& cfg);
FlooderBehavior flooder_behavior(const ScenarioConfig& cfg);

}  // namespace sinkguard
