#include "doctest.h"
#include "sinkguard/rpl.hpp"
#include "sinkguard/scenario.hpp"
#include "support.hpp"

using namespace sinkguard;
using testing_support::line_topology;
using testing_support::star_topology;

namespace {

RoutingState state_with_rank(NodeId self, std::uint32_t rank) {
  RoutingState s;
  s.self = self;
  s.my_rank = Rank{rank};
  return s;
}

RouteContext context(NodeId holder, NodeId root = 0) {
  RouteContext c;
  c.holder = holder;
  c.root = root;
  c.now = SimTime::from_seconds(1.0);
  c.timeout = SimTime::from_seconds(5.0);
  return c;
}

}  // namespace

TEST_CASE("initial ranks are hop counts") {
  SUBCASE("two-node line") {
    const auto r = assign_initial_ranks(line_topology(2));
    CHECK(r[0].value == 0);
    CHECK(r[1].value == 1);
  }
  SUBCASE("a node three hops out has rank 3 and its child rank 4") {
    // root - a - b - N8 - N9
    const auto r = assign_initial_ranks(line_topology(5));
    CHECK(r[3].value == 3);
    CHECK(r[4].value == 4);
  }
  SUBCASE("star leaves all have rank 1") {
    const auto r = assign_initial_ranks(star_topology(7));
    for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i].value == 1);
  }
  SUBCASE("disconnected topology") {
    const auto t = make_topology({{0, 0}, {100, 100}}, 10.0, 0);
    CHECK_THROWS_AS(assign_initial_ranks(t), Error);
    try {
      assign_initial_ranks(t);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UnreachableNode);
    }
  }
}

TEST_CASE("parent selection") {
  SUBCASE("lowest rank, ties to the lowest id") {
    auto s = state_with_rank(9, 3);
    CHECK(select_parent(s, {{4, Rank{2}}, {5, Rank{2}}, {6, Rank{3}}}) == 4);
    CHECK(*s.parent_id == 4);
  }
  SUBCASE("blacklisted neighbors are skipped") {
    auto s = state_with_rank(9, 3);
    s.blacklist.insert(1);
    CHECK(select_parent(s, {{1, Rank{0}}, {2, Rank{2}}}) == 2);
  }
  SUBCASE("dv-rank is the parent distance") {
    auto s = state_with_rank(9, 4);
    CHECK(select_parent(s, {{8, Rank{3}}}) == 8);
    CHECK(s.dv_rank == 1);
  }
  SUBCASE("an equally ranked current parent is kept") {
    auto s = state_with_rank(9, 1);
    s.parent_id = 5;
    CHECK(select_parent(s, {{2, Rank{0}}, {5, Rank{0}}}) == 5);
    CHECK(select_parent(s, {{2, Rank{0}}, {5, Rank{1}}}) == 2);
  }
  SUBCASE("no usable neighbor") {
    auto s = state_with_rank(9, 2);
    s.blacklist.insert(1);
    try {
      select_parent(s, {{1, Rank{0}}, {2, kInfiniteRank}});
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NoParentAvailable);
    }
  }
}

TEST_CASE("route refresh follows the best neighbor and orphans when none is left") {
  auto s = state_with_rank(3, 2);
  s.parent_id = 1;
  NeighborRanks views{{1, Rank{1}}, {2, Rank{1}}, {4, Rank{3}}};
  auto r = refresh_route(s, views, 100);
  CHECK_FALSE(r.rank_changed);
  CHECK_FALSE(r.parent_changed);

  views[1] = Rank{0};
  r = refresh_route(s, views, 100);
  CHECK(r.rank_changed);
  CHECK(s.my_rank.value == 1);

  s.blacklist = {1, 2, 4};
  r = refresh_route(s, views, 100);
  CHECK(r.parent_changed);
  CHECK(s.orphaned());
  CHECK(s.my_rank.infinite());

  auto capped = state_with_rank(3, 2);
  refresh_route(capped, {{1, Rank{9}}}, 10);
  CHECK(capped.orphaned());
}

TEST_CASE("upward routing decisions") {
  SUBCASE("chain root <- A <- B delivers in two hops") {
    const auto t = line_topology(3);
    const auto ranks = assign_initial_ranks(t);
    std::vector<RoutingState> st(3);
    for (NodeId v = 0; v < 3; ++v) {
      st[v] = state_with_rank(v, ranks[v].value);
      NeighborRanks views;
      for (NodeId u : t.adjacency[v]) views[u] = ranks[u];
      if (v != 0) select_parent(st[v], views);
    }
    DataPacket p{2, 0, SimTime{}, 0, false};
    NodeId at = 2;
    int steps = 0;
    for (;;) {
      const auto d = route_upward(p, st[at], context(at));
      if (d.kind != RouteDecision::Kind::Forward) {
        CHECK(d.kind == RouteDecision::Kind::Delivered);
        break;
      }
      at = d.next_hop;
      REQUIRE(++steps < 10);
    }
    CHECK(at == 0);
    CHECK(p.hops == 2);
  }
  SUBCASE("a sinkhole in drop mode discards what its child hands it") {
    // B forwards to its parent M; M drops.
    auto b = state_with_rank(2, 2);
    b.parent_id = 1;
    DataPacket p{2, 0, SimTime{}, 0, false};
    auto d = route_upward(p, b, context(2));
    REQUIRE(d.kind == RouteDecision::Kind::Forward);
    CHECK(d.next_hop == 1);
    auto m = state_with_rank(1, 1);
    m.parent_id = 0;
    auto ctx = context(1);
    ctx.holder_is_active_sinkhole = true;
    d = route_upward(p, m, ctx);
    CHECK(d.kind == RouteDecision::Kind::Dropped);
    CHECK(d.reason == DropReason::Sinkhole);
  }
  SUBCASE("alter mode forwards a corrupted packet that the root refuses") {
    auto m = state_with_rank(1, 1);
    m.parent_id = 0;
    auto ctx = context(1);
    ctx.holder_is_active_sinkhole = true;
    ctx.sinkhole_mode = SinkholeMode::Alter;
    DataPacket p{2, 0, SimTime{}, 1, false};
    auto d = route_upward(p, m, ctx);
    CHECK(d.kind == RouteDecision::Kind::Forward);
    CHECK(p.corrupt);
    d = route_upward(p, state_with_rank(0, 0), context(0));
    CHECK(d.kind == RouteDecision::Kind::Dropped);
    CHECK(d.reason == DropReason::Altered);
  }
  SUBCASE("isolated node") {
    DataPacket p{4, 0, SimTime{}, 0, false};
    const auto d = route_upward(p, state_with_rank(4, Rank::kInfinite), context(4));
    CHECK(d.kind == RouteDecision::Kind::Dropped);
    CHECK(d.reason == DropReason::NoParent);
  }
  SUBCASE("ttl and timeout") {
    auto s = state_with_rank(4, 3);
    s.parent_id = 2;
    auto ctx = context(4);
    ctx.ttl = 3;
    DataPacket p{4, 0, SimTime{}, 3, false};
    CHECK(route_upward(p, s, ctx).reason == DropReason::Ttl);
    DataPacket old{4, 0, SimTime{}, 0, false};
    ctx.now = SimTime::from_seconds(5.5);
    CHECK(route_upward(old, s, ctx).reason == DropReason::Timeout);
  }
}

TEST_CASE("blacklist broadcasts") {
  SUBCASE("merge into an empty blacklist") {
    auto s = state_with_rank(3, 2);
    s.parent_id = 1;
    CHECK(apply_blacklist_broadcast(s, {7}, {{1, Rank{1}}, {7, Rank{3}}}, 100));
    CHECK(s.blacklist == std::set<NodeId>{7});
    CHECK(*s.parent_id == 1);
  }
  SUBCASE("losing the parent re-selects among the remaining neighbors") {
    // Node at true rank 3 that was lured by M1 (claims 0); B has rank 2.
    auto s = state_with_rank(3, 1);
    s.parent_id = 10;
    const NeighborRanks views{{10, Rank{0}}, {4, Rank{2}}, {6, Rank{3}}};
    CHECK(apply_blacklist_broadcast(s, {10}, views, 100));
    CHECK(*s.parent_id == 4);
    CHECK(s.my_rank.value == 3);
  }
  SUBCASE("repeating a known set changes nothing") {
    auto s = state_with_rank(3, 2);
    s.parent_id = 1;
    s.blacklist = {7, 8};
    const auto before = s.blacklist;
    CHECK_FALSE(apply_blacklist_broadcast(s, {8, 7}, {{1, Rank{1}}}, 100));
    CHECK(s.blacklist == before);
    CHECK(*s.parent_id == 1);
  }
  SUBCASE("a node never blacklists itself") {
    auto s = state_with_rank(3, 2);
    CHECK_FALSE(apply_blacklist_broadcast(s, {3}, {}, 100));
    CHECK(s.blacklist.empty());
  }
}

TEST_CASE("initial parent graphs are loop-free shortest-path trees") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    auto c = *preset("scenario1_small");
    c.seed = seed;
    c.malicious_fraction = 0;
    const auto t = generate_topology(c);
    const auto ranks = assign_initial_ranks(t);
    std::vector<RoutingState> st(t.size());
    for (NodeId v = 0; v < t.size(); ++v) {
      st[v] = state_with_rank(v, ranks[v].value);
      NeighborRanks views;
      for (NodeId u : t.adjacency[v]) {
        views[u] = ranks[u];
        const auto a = ranks[u].value, b = ranks[v].value;
        CHECK((a > b ? a - b : b - a) <= 1);
      }
      if (v != t.root_id) {
        select_parent(st[v], views);
        CHECK(st[v].dv_rank == 1);
      }
    }
    for (NodeId v = 0; v < t.size(); ++v) {
      NodeId at = v;
      std::size_t steps = 0;
      while (at != t.root_id) {
        const NodeId p = *st[at].parent_id;
        CHECK(ranks[p].value + 1 == ranks[at].value);
        at = p;
        REQUIRE(++steps <= t.size());
      }
    }
  }
}
