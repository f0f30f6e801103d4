#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sinkguard/types.hpp"

namespace sinkguard {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

using Adjacency = std::vector<std::vector<NodeId>>;

inline bool within_range(Point a, Point b, double range) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy <= range * range;
}

// Unit-disk neighbor sets, each sorted ascending. The serial version is the
// reference; the OpenMP version must produce an identical result.
Adjacency build_adjacency_serial(std::span<const Point> positions, double range);
Adjacency build_adjacency_parallel(std::span<const Point> positions, double range,
                                   int threads = 0);

// Hop distance from source, Rank::kInfinite where unreachable. Nodes flagged in
// `excluded` are neither visited nor traversed.
std::vector<std::uint32_t> bfs_hops(const Adjacency& adj, NodeId source,
                                    const std::vector<bool>& excluded = {});

bool is_connected(const Adjacency& adj);

}  // namespace sinkguard
