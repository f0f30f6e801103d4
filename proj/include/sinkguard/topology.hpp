#pragma once

#include <vector>

#include "sinkguard/kernels.hpp"
#include "sinkguard/scenario.hpp"

namespace sinkguard {

enum class Role { Benign, Sinkhole, Flooder };

struct Topology {
  std::vector<Point> positions;
  NodeId root_id = 0;
  double tx_range = 0.0;
  Adjacency adjacency;
  std::vector<NodeId> attacker_set;  // sorted
  std::vector<Role> roles;           // per node

  std::size_t size() const { return positions.size(); }
  bool is_attacker(NodeId id) const { return roles[id] != Role::Benign; }
  bool adjacent(NodeId a, NodeId b) const;
};

/// Uniform node placement over cfg.area, re-sampled (up to 100 attempts) until
/// the unit-disk graph is connected. The root is the node nearest the area
/// center; attackers are drawn uniformly among the other nodes, and the first
/// `flooder_count` drawn act as flooders, the rest as sinkholes.
Topology generate_topology(const ScenarioConfig& cfg);

/// Builds a topology from explicit positions, for hand-constructed layouts.
Topology make_topology(std::vector<Point> positions, double tx_range, NodeId root,
                       const std::vector<NodeId>& sinkholes = {},
                       const std::vector<NodeId>& flooders = {});

inline constexpr int kMaxPlacementAttempts = 100;

}  // namespace sinkguard
