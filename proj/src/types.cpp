#include "sinkguard/types.hpp"

#include <cstdio>
#include <cstdlib>

namespace sinkguard {

std::string format_seconds(SimTime t) {
  char buf[48];
  std::int64_t us = t.us;
  const char* sign = us < 0 ? "-" : "";
  if (us < 0) us = -us;
  std::snprintf(buf, sizeof buf, "%s%lld.%06lld", sign, static_cast<long long>(us / 1000000),
                static_cast<long long>(us % 1000000));
  return buf;
}

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ConnectivityFailure: return "ConnectivityFailure";
    case ErrorCode::UnreachableNode: return "UnreachableNode";
    case ErrorCode::NoParentAvailable: return "NoParentAvailable";
    case ErrorCode::NoParent: return "NoParent";
    case ErrorCode::MissingDvRank: return "MissingDvRank";
    case ErrorCode::InvalidAlpha: return "InvalidAlpha";
    case ErrorCode::UnknownNeighbor: return "UnknownNeighbor";
    case ErrorCode::NotAdjacent: return "NotAdjacent";
    case ErrorCode::NoTraffic: return "NoTraffic";
    case ErrorCode::ZeroDuration: return "ZeroDuration";
    case ErrorCode::EngineStall: return "EngineStall";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace sinkguard
