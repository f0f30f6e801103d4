#include "sinkguard/attackers.hpp"

#include <algorithm>
#include <cmath>

namespace sinkguard {

std::optional<DioMessage> sinkhole_emit_dio(const SinkholeBehavior& b, NodeId self, SimTime now) {
  if (now < b.attack_start) return std::nullopt;
  if ((now - b.attack_start).us % b.attack_interval.us != 0) return std::nullopt;
  return DioMessage{self, b.advertised_rank, now, true};
}

SimTime next_malicious_dio(const SinkholeBehavior& b, SimTime t) {
  if (t <= b.attack_start) return b.attack_start;
  const auto elapsed = (t - b.attack_start).us;
  const auto steps = (elapsed + b.attack_interval.us - 1) / b.attack_interval.us;
  return b.attack_start + SimTime{steps * b.attack_interval.us};
}

SinkholeAction sinkhole_handle_data(SinkholeMode mode, DataPacket& packet) {
  if (mode == SinkholeMode::Drop) return SinkholeAction::Dropped;
  packet.corrupt = true;
  return SinkholeAction::Altered;
}

std::uint32_t flooder_emit_rreqs(const FlooderBehavior& b, SimTime from, SimTime to) {
  const SimTime start = std::max(from, b.attack_start);
  if (to <= start) return 0;
  return static_cast<std::uint32_t>(std::llround(b.rreq_rate_per_s * (to - start).seconds()));
}

std::uint32_t benign_rreq_count(double rate, SimTime from, SimTime to) {
  if (to <= from || rate <= 0) return 0;
  const auto hi = std::floor(rate * to.seconds());
  const auto lo = std::floor(rate * from.seconds());
  return static_cast<std::uint32_t>(hi - lo);
}

void check_flooder(const FlooderBehavior& b, double benign_rate) {
  if (!(b.rreq_rate_per_s > benign_rate))
    throw Error(ErrorCode::InvalidConfig, "flooder_rreq_rate must exceed benign_rreq_rate");
}

SinkholeBehavior sinkhole_behavior(const ScenarioConfig& cfg) {
  return SinkholeBehavior{Rank{cfg.sinkhole_advertised_rank}, cfg.sinkhole_mode,
                          SimTime::from_seconds(cfg.attack_start()),
                          SimTime::from_seconds(cfg.attack_interval_s)};
}

FlooderBehavior flooder_behavior(const ScenarioConfig& cfg) {
  return FlooderBehavior{cfg.flooder_rreq_rate, SimTime::from_seconds(cfg.attack_start())};
}

}  // namespace sinkguard
