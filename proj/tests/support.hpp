#pragma once

#include <array>
#include <cmath>
#include <map>
#include <vector>

#include "sinkguard/engine.hpp"
#include "sinkguard/topology.hpp"
#include "sinkguard/transcript.hpp"

namespace testing_support {

using namespace sinkguard;

// Nodes on a line 10 m apart with a 15 m range: node i is i hops from node 0.
inline Topology line_topology(std::uint32_t n, const std::vector<NodeId>& sinkholes = {},
                              const std::vector<NodeId>& flooders = {}) {
  std::vector<Point> pts;
  for (std::uint32_t i = 0; i < n; ++i) pts.push_back({10.0 * i, 0.0});
  return make_topology(pts, 15.0, 0, sinkholes, flooders);
}

// Root at the center, k leaves on a 10 m circle, 15 m range.
inline Topology star_topology(std::uint32_t k) {
  std::vector<Point> pts{{50.0, 50.0}};
  for (std::uint32_t i = 0; i < k; ++i) {
    const double a = 6.283185307179586 * i / k;
    pts.push_back({50.0 + 10.0 * std::cos(a), 50.0 + 10.0 * std::sin(a)});
  }
  return make_topology(pts, 15.0, 0);
}

inline ScenarioConfig config_for(const Topology& t, double duration_s) {
  ScenarioConfig c;
  c.node_count = static_cast<std::uint32_t>(t.size());
  c.malicious_fraction = 0.0;
  c.duration_s = duration_s;
  return c;
}

// Independent replay of the data-plane part of an event log.
struct ReplayTally {
  std::uint64_t emitted = 0;
  std::uint64_t delivered = 0;
  std::array<std::uint64_t, kDropReasonCount> dropped{};
  std::uint64_t packets_with_multiple_fates = 0;
  std::uint64_t packets_without_fate = 0;
};

inline ReplayTally replay_data_plane(const RunTranscript& t) {
  ReplayTally out;
  std::map<std::int64_t, int> terminal;
  for (const auto& e : t.events) {
    switch (e.kind) {
      case TraceKind::DataEmitted:
        ++out.emitted;
        terminal.emplace(e.a, 0);
        break;
      case TraceKind::DataDelivered:
        ++out.delivered;
        ++terminal[e.a];
        break;
      case TraceKind::DataDropped:
        ++out.dropped.at(static_cast<std::size_t>(e.b));
        ++terminal[e.a];
        break;
      default: break;
    }
  }
  for (const auto& [seq, n] : terminal) {
    if (n == 0) ++out.packets_without_fate;
    if (n > 1) ++out.packets_with_multiple_fates;
  }
  return out;
}

}  // namespace testing_support
