#include "sinkguard/kernels.hpp"

#include <deque>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sinkguard {

Adjacency build_adjacency_serial(std::span<const Point> positions, double range) {
  const auto n = positions.size();
  Adjacency adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (within_range(positions[i], positions[j], range)) {
        adj[i].push_back(static_cast<NodeId>(j));
        adj[j].push_back(static_cast<NodeId>(i));
      }
    }
  }
  // Pairs are visited in (i, j>i) order, so row j receives i's before its own
  // larger neighbors and every row ends up sorted.
  return adj;
}

Adjacency build_adjacency_parallel(std::span<const Point> positions, double range,
                                   int threads) {
  const auto n = static_cast<std::int64_t>(positions.size());
  Adjacency adj(positions.size());
#ifdef _OPENMP
  if (threads <= 0) threads = omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(threads)
#endif
  for (std::int64_t i = 0; i < n; ++i) {
    auto& row = adj[static_cast<std::size_t>(i)];
    const Point p = positions[static_cast<std::size_t>(i)];
    for (std::int64_t j = 0; j < n; ++j) {
      if (j != i && within_range(p, positions[static_cast<std::size_t>(j)], range))
        row.push_back(static_cast<NodeId>(j));
    }
  }
  (void)threads;
  return adj;
}

std::vector<std::uint32_t> bfs_hops(const Adjacency& adj, NodeId source,
                                    const std::vector<bool>& excluded) {
  std::vector<std::uint32_t> dist(adj.size(), Rank::kInfinite);
  if (source >= adj.size()) return dist;
  const auto skip = [&](NodeId v) { return !excluded.empty() && excluded[v]; };
  if (skip(source)) return dist;
  std::deque<NodeId> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    for (NodeId v : adj[u]) {
      if (dist[v] != Rank::kInfinite || skip(v)) continue;
      dist[v] = dist[u] + 1;
      queue.push_back(v);
    }
  }
  return dist;
}

bool is_connected(const Adjacency& adj) {
  if (adj.empty()) return true;
  for (auto d : bfs_hops(adj, 0))
    if (d == Rank::kInfinite) return false;
  return true;
}

}  // namespace sinkguard
