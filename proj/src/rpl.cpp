#include "sinkguard/rpl.hpp"

#include "sinkguard/attackers.hpp"

namespace sinkguard {

const char* to_string(DropReason r) {
  switch (r) {
    case DropReason::NoParent: return "no_parent";
    case DropReason::Sinkhole: return "sinkhole";
    case DropReason::Altered: return "altered";
    case DropReason::Ttl: return "ttl";
    case DropReason::Timeout: return "timeout";
  }
  return "unknown";
}

std::vector<Rank> assign_initial_ranks(const Topology& topology) {
  const auto hops = bfs_hops(topology.adjacency, topology.root_id);
  std::vector<Rank> ranks(hops.size());
  for (NodeId i = 0; i < hops.size(); ++i) {
    if (hops[i] == Rank::kInfinite)
      throw Error(ErrorCode::UnreachableNode, "node " + std::to_string(i) + " cannot reach the root");
    ranks[i] = Rank{hops[i]};
  }
  return ranks;
}

NodeId select_parent(RoutingState& state, const NeighborRanks& neighbor_ranks) {
  std::optional<std::pair<NodeId, Rank>> best;
  // std::map iterates in id order, so the first strict minimum wins ties.
  for (const auto& [id, rank] : neighbor_ranks) {
    if (id == state.self || rank.infinite() || state.blacklist.contains(id)) continue;
    if (!best || rank < best->second) best = {id, rank};
  }
  // An equally good current parent is kept.
  if (best && state.parent_id && *state.parent_id != best->first) {
    const auto cur = neighbor_ranks.find(*state.parent_id);
    if (cur != neighbor_ranks.end() && cur->second == best->second &&
        !state.blacklist.contains(cur->first))
      best = *cur;
  }
  if (!best)
    throw Error(ErrorCode::NoParentAvailable,
                "node " + std::to_string(state.self) + " has no usable neighbor");
  state.parent_id = best->first;
  const auto pr = best->second.value;
  const auto mr = state.my_rank.value;
  state.dv_rank = pr > mr ? pr - mr : mr - pr;
  return best->first;
}

RouteRefresh refresh_route(RoutingState& state, const NeighborRanks& neighbor_ranks,
                           std::uint32_t max_rank) {
  const auto old_parent = state.parent_id;
  const auto old_rank = state.my_rank;
  bool usable = true;
  try {
    const NodeId p = select_parent(state, neighbor_ranks);
    const auto pr = neighbor_ranks.at(p).value;
    if (pr + 1 >= max_rank) {
      usable = false;
    } else {
      state.my_rank = Rank{pr + 1};
      state.dv_rank = 1;
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoParentAvailable) throw;
    usable = false;
  }
  if (!usable) {
    state.parent_id.reset();
    state.my_rank = kInfiniteRank;
    state.dv_rank = 0;
  }
  return RouteRefresh{state.my_rank != old_rank, state.parent_id != old_parent};
}

RouteDecision route_upward(DataPacket& packet, const RoutingState& state,
                           const RouteContext& ctx) {
  using Kind = RouteDecision::Kind;
  if (ctx.holder == ctx.root) {
    if (packet.corrupt) return {Kind::Dropped, kNoNode, DropReason::Altered};
    return {Kind::Delivered, kNoNode, DropReason::NoParent};
  }
  if (ctx.holder_is_active_sinkhole &&
      sinkhole_handle_data(ctx.sinkhole_mode, packet) == SinkholeAction::Dropped)
    return {Kind::Dropped, kNoNode, DropReason::Sinkhole};
  if (ctx.now - packet.emitted_at > ctx.timeout) return {Kind::Dropped, kNoNode, DropReason::Timeout};
  if (packet.hops >= ctx.ttl) return {Kind::Dropped, kNoNode, DropReason::Ttl};
  if (!state.parent_id) return {Kind::Dropped, kNoNode, DropReason::NoParent};
  ++packet.hops;
  return {Kind::Forward, *state.parent_id, DropReason::NoParent};
}

bool apply_blacklist_broadcast(RoutingState& state, const std::vector<NodeId>& suspects,
                               const NeighborRanks& neighbor_ranks, std::uint32_t max_rank) {
  const auto before = state.blacklist.size();
  for (NodeId s : suspects)
    if (s != state.self) state.blacklist.insert(s);
  if (state.blacklist.size() == before) return false;
  if (state.parent_id && state.blacklist.contains(*state.parent_id))
    refresh_route(state, neighbor_ranks, max_rank);
  return true;
}

}  // namespace sinkguard
