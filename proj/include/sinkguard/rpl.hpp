#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "sinkguard/messages.hpp"
#include "sinkguard/topology.hpp"

namespace sinkguard {

/// Last rank advertised by each neighbor, as seen by one node.
using NeighborRanks = std::map<NodeId, Rank>;

struct RoutingState {
  NodeId self = kNoNode;
  Rank my_rank{};
  std::optional<NodeId> parent_id;
  std::uint32_t dv_rank = 0;  // |parent rank - my rank| at the last parent selection
  std::set<NodeId> blacklist;

  bool orphaned() const { return !parent_id && my_rank.infinite(); }
};

/// Breadth-first hop distances from the root. Throws UnreachableNode if the
/// topology is not connected.
std::vector<Rank> assign_initial_ranks(const Topology& topology);

/// Picks the non-blacklisted neighbor with the lowest advertised rank. On a
/// tie an equally ranked current parent is kept, otherwise the lowest id wins.
/// Records the parent and stores the resulting DV-RANK against the current
/// my_rank. Throws NoParentAvailable.
NodeId select_parent(RoutingState& state, const NeighborRanks& neighbor_ranks);

struct RouteRefresh {
  bool rank_changed = false;
  bool parent_changed = false;
};

/// Re-derives parent and rank (parent rank + 1) from the current neighbor
/// view. A node whose best option would reach `max_rank` or that has no
/// usable neighbor becomes orphaned with infinite rank.
RouteRefresh refresh_route(RoutingState& state, const NeighborRanks& neighbor_ranks,
                           std::uint32_t max_rank);

/// Per-hop data-plane context for the node currently holding a packet.
struct RouteContext {
  NodeId holder = kNoNode;
  NodeId root = kNoNode;
  SimTime now{};
  std::uint32_t ttl = 64;
  SimTime timeout{};
  bool holder_is_active_sinkhole = false;
  SinkholeMode sinkhole_mode = SinkholeMode::Drop;
};

struct RouteDecision {
  enum class Kind { Delivered, Forward, Dropped };
  Kind kind = Kind::Dropped;
  NodeId next_hop = kNoNode;
  DropReason reason = DropReason::NoParent;
};

/// Upward forwarding toward the root. Increments the hop count on Forward.
RouteDecision route_upward(DataPacket& packet, const RoutingState& state,
                           const RouteContext& ctx);

/// Merges root-announced suspects into the blacklist and re-runs parent
/// selection when the current parent is among them. Returns true if the
/// blacklist grew.
bool apply_blacklist_broadcast(RoutingState& state, const std::vector<NodeId>& suspects,
                               const NeighborRanks& neighbor_ranks, std::uint32_t max_rank);

}  // namespace sinkguard
