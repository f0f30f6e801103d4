#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace sinkguard {

using NodeId = std::uint32_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

/// Hop distance from the DODAG root. The root holds rank 0.
struct Rank {
  std::uint32_t value = 0;

  static constexpr std::uint32_t kInfinite = 0xFFFFu;

  constexpr bool infinite() const { return value >= kInfinite; }
  friend constexpr auto operator<=>(Rank, Rank) = default;
};

inline constexpr Rank kInfiniteRank{Rank::kInfinite};

/// Simulation clock in integer microseconds, so that per-hop latency sums are
/// exact and replay is bit-identical on every platform.
struct SimTime {
  std::int64_t us = 0;

  static constexpr SimTime from_seconds(double s) {
    double scaled = s * 1e6;
    return SimTime{static_cast<std::int64_t>(scaled < 0 ? scaled - 0.5 : scaled + 0.5)};
  }
  constexpr double seconds() const { return static_cast<double>(us) / 1e6; }

  friend constexpr SimTime operator+(SimTime a, SimTime b) { return {a.us + b.us}; }
  friend constexpr SimTime operator-(SimTime a, SimTime b) { return {a.us - b.us}; }
  friend constexpr auto operator<=>(SimTime, SimTime) = default;
};

/// Formats a time as seconds with six decimals, derived from the integer clock.
std::string format_seconds(SimTime t);

enum class ErrorCode {
  InvalidConfig,
  ConnectivityFailure,
  UnreachableNode,
  NoParentAvailable,
  NoParent,
  MissingDvRank,
  InvalidAlpha,
  UnknownNeighbor,
  NotAdjacent,
  NoTraffic,
  ZeroDuration,
  EngineStall,
  Io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sinkguard
