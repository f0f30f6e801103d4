#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "doctest.h"
#include "sinkguard/engine.hpp"
#include "sinkguard/metrics.hpp"
#include "sinkguard/rpl.hpp"
#include "support.hpp"

using namespace sinkguard;
using namespace testing_support;

namespace {

SimTime at(double s) { return SimTime::from_seconds(s); }

std::string trace_text(const RunTranscript& t) {
  std::ostringstream o;
  write_trace(o, t);
  return o.str();
}

RunTranscript traced(const ScenarioConfig& c) { return run(c, RunOptions{true}); }

ScenarioConfig small(std::string name, std::uint64_t seed) {
  auto c = *preset(name);
  c.seed = seed;
  return c;
}

// No data packet is handed to a neighbor the holder has already blacklisted.
void check_no_forwarding_to_blacklisted(const RunTranscript& t) {
  std::vector<std::set<NodeId>> known(t.roles.size());
  std::uint64_t violations = 0;
  for (const auto& e : t.events) {
    if (e.kind == TraceKind::Blacklisted) known[e.node].insert(e.peer);
    if (e.kind == TraceKind::DataForwarded && known[e.node].contains(e.peer)) ++violations;
  }
  CHECK(violations == 0);
  for (NodeId v = 0; v < t.roles.size(); ++v) {
    if (v == t.root_id) continue;
    for (NodeId s : known[v])
      CHECK(std::binary_search(t.final_blacklists[v].begin(), t.final_blacklists[v].end(), s));
  }
}

void check_parent_graph_acyclic(const RunTranscript& t) {
  const auto n = t.final_parents.size();
  for (NodeId v = 0; v < n; ++v) {
    NodeId at = v;
    std::size_t steps = 0;
    while (at != kNoNode && at != t.root_id && steps <= n) {
      at = t.final_parents[at];
      ++steps;
    }
    CHECK(steps <= n);
  }
}

}  // namespace

TEST_CASE("event queue orders by time then insertion") {
  EventQueue q;
  const auto push = [&](double s, NodeId node) {
    Event e;
    e.time = at(s);
    e.node = node;
    return q.push(e);
  };
  push(2.0, 1);
  push(1.0, 2);
  push(1.0, 3);
  push(0.5, 4);
  std::vector<NodeId> order;
  while (!q.empty()) order.push_back(q.pop().node);
  CHECK(order == std::vector<NodeId>{4, 2, 3, 1});
  CHECK(q.now() == at(2.0));
  Event past;
  past.time = at(1.0);
  try {
    q.push(past);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EngineStall);
  }
}

TEST_CASE("delivery scheduling") {
  const auto topo = star_topology(3);
  Simulator sim(config_for(topo, 10), topo);
  SUBCASE("one hop takes 5 ms") {
    sim.deliver(HelloMessage{0, 0}, 0, 1, at(1.0));
    const auto ev = sim.queue().pending();
    REQUIRE(ev.size() == 1);
    CHECK(ev[0].time == at(1.005));
    CHECK(ev[0].kind == EventKind::MessageDelivery);
    CHECK(ev[0].node == 1);
    CHECK(ev[0].from == 0);
  }
  SUBCASE("non-adjacent pair") {
    // Opposite leaves of the star are 20 m apart, beyond the 15 m range.
    const auto& t = sim.topology();
    NodeId far = kNoNode;
    for (NodeId v = 2; v <= 3; ++v)
      if (!t.adjacent(1, v)) far = v;
    REQUIRE(far != kNoNode);
    try {
      sim.deliver(HelloMessage{1, 0}, 1, far, at(1.0));
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotAdjacent);
    }
  }
  SUBCASE("broadcast to three neighbors") {
    sim.broadcast(DioMessage{0, Rank{0}, at(2.0), false}, 0, at(2.0));
    const auto ev = sim.queue().pending();
    REQUIRE(ev.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(ev[i].time == at(2.005));
      CHECK(ev[i].node == i + 1);
      if (i > 0) CHECK(ev[i].sequence > ev[i - 1].sequence);
    }
  }
}

TEST_CASE("a zero-length run is empty") {
  auto c = small("scenario1_small", 1);
  c.duration_s = 0;
  const auto t = traced(c);
  CHECK(t.fates.empty());
  CHECK(t.events.empty());
  CHECK(t.verdicts.empty());
  CHECK(t.stats.events_processed == 0);
}

TEST_CASE("benign line of ten sources delivers every packet") {
  const auto topo = line_topology(11);
  const auto t = simulate(config_for(topo, 100), topo, RunOptions{true});
  CHECK(t.fates.size() == 1000);
  CHECK(std::all_of(t.fates.begin(), t.fates.end(), [](const PacketFate& f) { return f.delivered(); }));
  for (const auto& f : t.fates) CHECK(f.hops == f.src);  // node i sits i hops out
  const auto r = replay_data_plane(t);
  CHECK(r.emitted == 1000);
  CHECK(r.delivered == 1000);
  CHECK(t.verdicts.empty());
}

TEST_CASE("without detection a sinkhole swallows all traffic it attracts") {
  // root(0) - 1 - 2 - M(3) - 4 - 5 : M's children route through it.
  const auto topo = line_topology(6, {3});
  auto c = config_for(topo, 60);
  c.detection_enabled = false;
  c.attack_start_s = 10;
  const auto t = simulate(c, topo, RunOptions{true});
  std::uint64_t audited = 0;
  std::map<std::int64_t, bool> through_sinkhole;
  for (const auto& e : t.events)
    if (e.kind == TraceKind::DataForwarded && e.peer == 3 && e.time >= at(10)) through_sinkhole[e.a] = true;
  for (const auto& [seq, _] : through_sinkhole) {
    const auto& f = t.fates[static_cast<std::size_t>(seq)];
    CHECK_FALSE(f.delivered());
    REQUIRE(f.drop_reason);
    CHECK(*f.drop_reason == DropReason::Sinkhole);
    CHECK(f.last_holder == 3);
    ++audited;
  }
  CHECK(audited > 0);
  CHECK(t.root_blacklist.empty());
  // Nodes 1 and 2 lie between the sinkhole and the root and still deliver.
  for (const auto& f : t.fates)
    if (f.src == 1) CHECK(f.delivered());
}

TEST_CASE("with detection the same sinkhole is reported and routed around") {
  // Two-row ladder: every node has a sinkhole-free alternative.
  std::vector<Point> pts;
  for (int i = 0; i < 6; ++i) pts.push_back({10.0 * i, 0.0});
  for (int i = 0; i < 6; ++i) pts.push_back({10.0 * i, 10.0});
  const auto topo = make_topology(pts, 10.5, 0, {9});
  auto c = config_for(topo, 60);
  c.attack_start_s = 10;
  const auto t = simulate(c, topo, RunOptions{true});
  CHECK(t.root_blacklist.contains(9));
  CHECK(t.root_blacklist.size() == 1);
  const auto cm = confusion_matrix(t);
  CHECK(cm.fp == 0);
  check_no_forwarding_to_blacklisted(t);
  check_parent_graph_acyclic(t);
  for (NodeId v = 0; v < topo.size(); ++v)
    if (v != 9 && v != t.root_id) {
      CHECK(std::binary_search(t.final_blacklists[v].begin(), t.final_blacklists[v].end(), 9));
      CHECK(t.final_parents[v] != 9);
    }
}

TEST_CASE("a sinkhole emits one lie per interval after attack start") {
  const auto topo = line_topology(6, {3});
  auto c = config_for(topo, 1100);
  c.attack_start_s = 100;
  c.attack_interval_s = 4;
  c.detection_enabled = false;
  const auto t = simulate(c, topo);
  CHECK(t.stats.malicious_dio_sent == 250);
}

TEST_CASE("benign random networks never produce a malicious verdict") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto c = small("scenario1_small", seed);
    c.malicious_fraction = 0;
    c.duration_s = 60;
    const auto t = run(c);
    CHECK(t.verdicts.empty());
    CHECK(t.stats.malicious_rank_verdicts == 0);
    CHECK(t.stats.malicious_flood_verdicts == 0);
    CHECK(t.stats.benign_dio_verdicts > 0);
    CHECK(t.stats.flood_checks > 0);
    CHECK(t.root_blacklist.empty());
    CHECK(t.delivered() == t.sent());
  }
}

TEST_CASE("runs replay byte for byte") {
  const auto c = small("scenario2_small", 7);
  const auto a = traced(c);
  const auto b = traced(c);
  CHECK(trace_text(a) == trace_text(b));
  auto d = c;
  d.seed = 8;
  CHECK(trace_text(traced(d)) != trace_text(a));
}

TEST_CASE("event log invariants under attack") {
  for (std::uint64_t seed : {1, 2, 3}) {
    auto c = small("scenario3_small", seed);
    c.duration_s = 80;
    if (seed == 2) c.sinkhole_mode = SinkholeMode::Alter;
    if (seed == 3) c.flooder_count = 3;
    const auto t = traced(c);
    CAPTURE(seed);

    SUBCASE("conservation") {
      const auto r = replay_data_plane(t);
      CHECK(r.packets_without_fate == 0);
      CHECK(r.packets_with_multiple_fates == 0);
      CHECK(r.emitted == t.sent());
      CHECK(r.delivered == t.delivered());
      CHECK(r.dropped == t.drops_by_reason());
      std::uint64_t dropped = 0;
      for (auto d : r.dropped) dropped += d;
      CHECK(r.emitted == r.delivered + dropped);
    }
    SUBCASE("causality and ordering") {
      std::multiset<std::pair<std::int64_t, NodeId>> sent;
      SimTime last{};
      for (const auto& e : t.events) {
        CHECK(e.time >= last);
        last = e.time;
        if (e.kind == TraceKind::DioSent) sent.insert({e.time.us, e.node});
        if (e.kind == TraceKind::DioReceived || e.kind == TraceKind::DioIgnored) {
          const auto it = sent.find({e.time.us - 5000, e.peer});
          CHECK(it != sent.end());
        }
      }
    }
    SUBCASE("blacklists and routes") {
      check_no_forwarding_to_blacklisted(t);
      check_parent_graph_acyclic(t);
      CHECK(confusion_matrix(t).fp == 0);
    }
    SUBCASE("attackers never report") {
      for (const auto& e : t.events)
        if (e.kind == TraceKind::ReportSent) CHECK(t.roles[e.node] == Role::Benign);
    }
    SUBCASE("sinkhole DIOs always carry the configured rank") {
      for (const auto& e : t.events)
        if (e.kind == TraceKind::DioSent && e.b == 1) {
          CHECK(t.roles[e.node] == Role::Sinkhole);
          CHECK(e.a == 0);
        }
    }
  }
}

TEST_CASE("root broadcast reaches every node that has a suspect-free path") {
  for (std::uint64_t seed : {1, 2}) {
    auto c = small("scenario2_small", seed);
    c.duration_s = 100;
    const auto t = run(c);
    REQUIRE_FALSE(t.root_blacklist.empty());
    std::vector<bool> excluded(t.roles.size(), false);
    for (const auto& [s, _] : t.root_blacklist) excluded[s] = true;
    for (NodeId v = 0; v < t.roles.size(); ++v)
      if (t.roles[v] == Role::Sinkhole) excluded[v] = true;  // active sinkholes do not relay
    // Rebuild adjacency from the run's configuration.
    const auto topo = generate_topology(c);
    const auto hops = bfs_hops(topo.adjacency, topo.root_id, excluded);
    for (NodeId v = 0; v < t.roles.size(); ++v) {
      if (v == t.root_id || hops[v] == Rank::kInfinite) continue;
      for (const auto& [s, _] : t.root_blacklist)
        CHECK(std::binary_search(t.final_blacklists[v].begin(), t.final_blacklists[v].end(), s));
    }
  }
}

TEST_CASE("queued reports leave once the holder has a parent again") {
  // Random-waypoint motion breaks and re-forms links, so holders lose and
  // regain parents while reports are in flight.
  std::uint64_t queued_then_released = 0;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    auto c = small("scenario3_small", seed);
    c.duration_s = 120;
    c.node_count = 60;
    c.tx_range = 22;
    c.mobility = Mobility::RandomWaypoint;
    c.mobility_speed = 2.0;
    const auto t = traced(c);
    CHECK(replay_data_plane(t).packets_without_fate == 0);
    std::map<NodeId, std::multiset<NodeId>> waiting;  // holder -> suspects
    for (const auto& e : t.events) {
      if (e.kind == TraceKind::ReportQueued) waiting[e.node].insert(e.peer);
      if (e.kind == TraceKind::ParentChanged && e.peer != kNoNode && !waiting[e.node].empty()) {
        // Everything queued at this holder must be forwarded right away.
        auto pending = waiting[e.node];
        waiting[e.node].clear();
        for (const auto& f : t.events) {
          if (f.time != e.time || f.node != e.node || f.kind != TraceKind::ReportForwarded) continue;
          if (auto it = pending.find(static_cast<NodeId>(f.a)); it != pending.end()) pending.erase(it);
        }
        CHECK(pending.empty());
        ++queued_then_released;
      }
    }
  }
  MESSAGE("queued reports released after re-parenting: " << queued_then_released);
}
