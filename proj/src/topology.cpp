#include "sinkguard/topology.hpp"

#include <algorithm>
#include <numeric>

#include "sinkguard/rng.hpp"

namespace sinkguard {

bool Topology::adjacent(NodeId a, NodeId b) const {
  if (a >= adjacency.size()) return false;
  const auto& row = adjacency[a];
  return std::binary_search(row.begin(), row.end(), b);
}

namespace {

NodeId nearest_to_center(const std::vector<Point>& pts, const Area& area) {
  const Point center{area.width / 2.0, area.height / 2.0};
  NodeId best = 0;
  double best_d = -1.0;
  for (NodeId i = 0; i < pts.size(); ++i) {
    const double dx = pts[i].x - center.x;
    const double dy = pts[i].y - center.y;
    const double d = dx * dx + dy * dy;
    if (best_d < 0 || d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

}  // namespace

Topology generate_topology(const ScenarioConfig& cfg) {
  validate(cfg);
  Rng rng(cfg.seed);
  Topology topo;
  topo.tx_range = cfg.tx_range;

  bool connected = false;
  for (int attempt = 0; attempt < kMaxPlacementAttempts && !connected; ++attempt) {
    topo.positions.assign(cfg.node_count, Point{});
    for (auto& p : topo.positions) {
      p.x = rng.uniform(0.0, cfg.area.width);
      p.y = rng.uniform(0.0, cfg.area.height);
    }
    topo.adjacency = build_adjacency_parallel(topo.positions, cfg.tx_range);
    connected = is_connected(topo.adjacency);
  }
  if (!connected)
    throw Error(ErrorCode::ConnectivityFailure,
                "no connected placement after " + std::to_string(kMaxPlacementAttempts) +
                    " attempts; raise tx_range or node density");

  topo.root_id = nearest_to_center(topo.positions, cfg.area);

  std::vector<NodeId> pool;
  pool.reserve(cfg.node_count - 1);
  for (NodeId i = 0; i < cfg.node_count; ++i)
    if (i != topo.root_id) pool.push_back(i);

  const std::uint32_t k = cfg.attacker_count();
  for (std::uint32_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::uint32_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  topo.roles.assign(cfg.node_count, Role::Benign);
  for (std::uint32_t i = 0; i < k; ++i)
    topo.roles[pool[i]] = i < cfg.flooder_count ? Role::Flooder : Role::Sinkhole;
  topo.attacker_set.assign(pool.begin(), pool.begin() + k);
  std::sort(topo.attacker_set.begin(), topo.attacker_set.end());
  return topo;
}

Topology make_topology(std::vector<Point> positions, double tx_range, NodeId root,
                       const std::vector<NodeId>& sinkholes,
                       const std::vector<NodeId>& flooders) {
  Topology topo;
  topo.positions = std::move(positions);
  topo.tx_range = tx_range;
  topo.root_id = root;
  topo.adjacency = build_adjacency_serial(topo.positions, tx_range);
  topo.roles.assign(topo.positions.size(), Role::Benign);
  const auto mark = [&](const std::vector<NodeId>& ids, Role role) {
    for (NodeId id : ids) {
      if (id >= topo.size() || id == root)
        throw Error(ErrorCode::InvalidConfig, "attacker id " + std::to_string(id) + " invalid");
      topo.roles[id] = role;
      topo.attacker_set.push_back(id);
    }
  };
  mark(sinkholes, Role::Sinkhole);
  mark(flooders, Role::Flooder);
  std::sort(topo.attacker_set.begin(), topo.attacker_set.end());
  topo.attacker_set.erase(std::unique(topo.attacker_set.begin(), topo.attacker_set.end()),
                          topo.attacker_set.end());
  return topo;
}

}  // namespace sinkguard
