#include "sinkguard/engine.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sinkguard/attackers.hpp"
#include "sinkguard/detector.hpp"
#include "sinkguard/rng.hpp"
#include "sinkguard/rpl.hpp"

namespace sinkguard {

std::uint64_t EventQueue::push(Event e) {
  if (e.time < now_)
    throw Error(ErrorCode::EngineStall, "event scheduled in the past at " + format_seconds(e.time));
  e.sequence = next_sequence_++;
  const auto seq = e.sequence;
  heap_.push(std::move(e));
  return seq;
}

Event EventQueue::pop() {
  Event e = heap_.top();
  heap_.pop();
  now_ = e.time;
  return e;
}

std::vector<Event> EventQueue::pending() const {
  auto copy = heap_;
  std::vector<Event> out;
  out.reserve(copy.size());
  while (!copy.empty()) {
    out.push_back(copy.top());
    copy.pop();
  }
  return out;
}

namespace {

struct NodeRuntime {
  Role role = Role::Benign;
  RoutingState routing;
  NeighborRanks views;
  FloodMonitor flood;
  ReportOutbox outbox;
  std::uint32_t last_broadcast = 0;
  SimTime last_hello{};
  Point waypoint{};
};

SimTime quantize(double seconds) { return SimTime::from_seconds(seconds); }

}  // namespace

struct Simulator::Impl {
  ScenarioConfig cfg;
  Topology topo;
  RunOptions opts;
  EventQueue queue;
  std::vector<NodeRuntime> nodes;
  RunTranscript out;
  RootRegistry registry;
  SinkholeBehavior sinkhole;
  FlooderBehavior flooder;
  Rng timing;

  SimTime duration, latency, timeout, attack_start, warmup_end;
  SimTime dio_period, hello_period, traffic_period, mobility_tick;
  std::uint32_t max_rank = 0;
  std::uint64_t current_seq = 0;
  SimTime last_timer{};

  Impl(ScenarioConfig c, Topology t, RunOptions o)
      : cfg(std::move(c)),
        topo(std::move(t)),
        opts(o),
        sinkhole(sinkhole_behavior(cfg)),
        flooder(flooder_behavior(cfg)),
        timing(cfg.seed * 0x9E3779B97F4A7C15ull + 0xD1B54A32D192ED03ull) {
    duration = quantize(cfg.duration_s);
    latency = quantize(cfg.hop_latency_s);
    timeout = quantize(cfg.packet_timeout_s);
    attack_start = quantize(cfg.attack_start());
    warmup_end = quantize(cfg.warmup_end());
    dio_period = quantize(cfg.dio_period_s);
    hello_period = quantize(cfg.hello_period_s);
    traffic_period = quantize(cfg.traffic_period_s);
    mobility_tick = quantize(cfg.mobility_tick_s);
    max_rank = static_cast<std::uint32_t>(std::min<std::size_t>(topo.size(), Rank::kInfinite));
  }

  // --- helpers -------------------------------------------------------------

  bool sinkhole_active(NodeId v, SimTime now) const {
    return nodes[v].role == Role::Sinkhole && now >= attack_start;
  }
  bool runs_detection(NodeId v) const {
    return cfg.detection_enabled && nodes[v].role != Role::Sinkhole;
  }
  bool files_reports(NodeId v) const {
    return runs_detection(v) && nodes[v].role == Role::Benign;
  }

  void trace(TraceKind kind, SimTime t, NodeId node, NodeId peer = kNoNode, std::int64_t a = 0,
             std::int64_t b = 0) {
    if (!opts.record_events) return;
    out.events.push_back(TraceRecord{t, current_seq, kind, node, peer, a, b});
  }

  void schedule(SimTime t, EventKind kind, NodeId node, TimerKind timer = TimerKind::Dio) {
    Event e;
    e.time = t;
    e.kind = kind;
    e.timer = timer;
    e.node = node;
    queue.push(std::move(e));
  }

  void deliver(const Message& m, NodeId from, NodeId to, SimTime now) {
    if (!topo.adjacent(from, to))
      throw Error(ErrorCode::NotAdjacent,
                  "nodes " + std::to_string(from) + " and " + std::to_string(to) + " not adjacent");
    Event e;
    e.time = now + latency;
    e.kind = EventKind::MessageDelivery;
    e.node = to;
    e.from = from;
    e.message = m;
    queue.push(std::move(e));
  }

  void broadcast(const Message& m, NodeId from, SimTime now) {
    for (NodeId to : topo.adjacency[from]) deliver(m, from, to, now);
  }

  // --- setup ---------------------------------------------------------------

  void init() {
    const auto n = topo.size();
    nodes.assign(n, NodeRuntime{});
    out.config = cfg;
    out.root_id = topo.root_id;
    out.roles = topo.roles;

    const auto ranks = assign_initial_ranks(topo);
    for (NodeId v = 0; v < n; ++v) {
      auto& node = nodes[v];
      node.role = topo.roles[v];
      node.routing.self = v;
      node.routing.my_rank = ranks[v];
      node.flood = make_flood_monitor(cfg.alpha_low, cfg.alpha_high);
      for (NodeId u : topo.adjacency[v]) node.views[u] = ranks[u];
      if (v != topo.root_id) select_parent(node.routing, node.views);
    }

    if (duration.us <= 0) return;

    const auto phase = [&](SimTime period) {
      return SimTime{static_cast<std::int64_t>(timing.below(static_cast<std::uint64_t>(period.us)))};
    };
    for (NodeId v = 0; v < n; ++v) {
      const SimTime dio_at = phase(dio_period);
      const SimTime hello_at = phase(hello_period);
      if (dio_at < duration) schedule(dio_at, EventKind::TimerFire, v, TimerKind::Dio);
      if (hello_at < duration) schedule(hello_at, EventKind::TimerFire, v, TimerKind::Hello);
      if (v != topo.root_id && nodes[v].role == Role::Benign) {
        const SimTime at = phase(traffic_period);
        if (at < duration) schedule(at, EventKind::TrafficEmit, v);
      }
    }
    if (attack_start < duration)
      for (NodeId v = 0; v < n; ++v)
        if (nodes[v].role == Role::Sinkhole) schedule(attack_start, EventKind::AttackAction, v);

    if (cfg.mobility == Mobility::RandomWaypoint) {
      for (NodeId v = 0; v < n; ++v)
        nodes[v].waypoint = {timing.uniform(0, cfg.area.width), timing.uniform(0, cfg.area.height)};
      if (mobility_tick < duration)
        schedule(mobility_tick, EventKind::TimerFire, topo.root_id, TimerKind::Mobility);
    }
  }

  // --- control plane -------------------------------------------------------

  void emit_dio(NodeId v, Rank rank, SimTime now, bool malicious) {
    ++out.stats.dio_sent;
    if (malicious) ++out.stats.malicious_dio_sent;
    trace(TraceKind::DioSent, now, v, kNoNode, rank.value, malicious ? 1 : 0);
    broadcast(DioMessage{v, rank, now, malicious}, v, now);
  }

  void flush_reports(NodeId v, SimTime now) {
    auto queued = take_pending(nodes[v].outbox, nodes[v].routing.parent_id.has_value());
    for (auto& r : queued) send_report(v, r, now);
  }

  /// Follow-up after any change to a node's neighbor view or blacklist.
  void refresh(NodeId v, SimTime now) {
    if (v == topo.root_id) return;
    auto& node = nodes[v];
    const auto before_parent = node.routing.parent_id;
    const auto before_rank = node.routing.my_rank;
    refresh_route(node.routing, node.views, max_rank);
    settle(v, before_parent, before_rank, now);
  }

  void settle(NodeId v, std::optional<NodeId> before_parent, Rank before_rank, SimTime now) {
    auto& node = nodes[v];
    if (node.routing.parent_id != before_parent) {
      trace(TraceKind::ParentChanged, now, v,
            node.routing.parent_id.value_or(kNoNode), node.routing.my_rank.value);
      flush_reports(v, now);
    }
    if (node.routing.my_rank != before_rank) emit_dio(v, node.routing.my_rank, now, false);
  }

  void on_detection(NodeId v, NodeId suspect, SimTime now) {
    auto& node = nodes[v];
    node.routing.blacklist.insert(suspect);
    trace(TraceKind::Blacklisted, now, v, suspect);
    if (auto it = out.first_local_detection.find(suspect); it == out.first_local_detection.end())
      out.first_local_detection.emplace(suspect, now);
    refresh(v, now);
    if (v == topo.root_id) {
      root_accept({suspect}, now);
      return;
    }
    if (!files_reports(v)) return;
    if (auto report = report_to_root(node.outbox, suspect, v)) {
      ++out.stats.reports_sent;
      trace(TraceKind::ReportSent, now, v, suspect);
      send_report(v, *report, now);
    }
  }

  void send_report(NodeId holder, MaliciousReport report, SimTime now) {
    if (holder == topo.root_id) {
      ++out.stats.reports_arrived;
      trace(TraceKind::ReportArrived, now, holder, report.suspect, report.reporter);
      root_accept({report.suspect}, now);
      return;
    }
    if (sinkhole_active(holder, now) || report.hops >= cfg.ttl) {
      ++out.stats.reports_dropped;
      trace(TraceKind::ReportDropped, now, holder, report.suspect, report.reporter);
      return;
    }
    auto& node = nodes[holder];
    if (!node.routing.parent_id || !topo.adjacent(holder, *node.routing.parent_id)) {
      trace(TraceKind::ReportQueued, now, holder, report.suspect, report.reporter);
      node.outbox.pending.push_back(report);
      return;
    }
    ++report.hops;
    trace(TraceKind::ReportForwarded, now, holder, *node.routing.parent_id, report.suspect);
    deliver(report, holder, *node.routing.parent_id, now);
  }

  void root_accept(const std::vector<NodeId>& suspects, SimTime now) {
    auto b = root_broadcast(registry, suspects);
    if (!b) return;
    auto& root = nodes[topo.root_id];
    for (NodeId s : *b->suspects) {
      out.root_blacklist.emplace(s, now);
      root.routing.blacklist.insert(s);
    }
    ++out.stats.broadcasts;
    trace(TraceKind::BroadcastSent, now, topo.root_id, kNoNode, b->sequence,
          static_cast<std::int64_t>(b->suspects->size()));
    relay_broadcast(topo.root_id, *b, now);
  }

  void relay_broadcast(NodeId v, const BlacklistBroadcast& b, SimTime now) {
    const auto& bl = nodes[v].routing.blacklist;
    for (NodeId u : topo.adjacency[v])
      if (!bl.contains(u)) deliver(b, v, u, now);
  }

  void on_dio(NodeId v, const DioMessage& dio, SimTime now) {
    ++out.stats.dio_received;
    auto& node = nodes[v];
    const NodeId s = dio.sender_id;
    // Under mobility the link may have broken while the DIO was in flight.
    if (sinkhole_active(v, now) || node.routing.blacklist.contains(s) || !topo.adjacent(v, s)) {
      trace(TraceKind::DioIgnored, now, v, s, dio.advertised_rank.value);
      return;
    }
    trace(TraceKind::DioReceived, now, v, s, dio.advertised_rank.value, node.routing.my_rank.value);

    // Poison advertisements withdraw a route and claim nothing; a node
    // without a rank has no DI-RANK to compute.
    if (runs_detection(v) && !dio.advertised_rank.infinite() && !node.routing.my_rank.infinite()) {
      RankEvidence ev;
      ev.dv_rank = node.routing.parent_id ? node.routing.dv_rank : kDefaultDvRank;
      ev.di_rank = compute_di_rank(node.routing.my_rank, dio.advertised_rank);
      ev.sender_id = s;
      ev.receiver_id = v;
      ev.time = now;
      const Verdict verdict = classify_dio(ev);
      if (verdict.malicious()) {
        ++out.stats.malicious_rank_verdicts;
        out.verdicts.push_back(
            VerdictRecord{now, v, s, verdict.kind, ev.dv_rank, ev.di_rank, std::nullopt, std::nullopt});
        trace(TraceKind::Verdict, now, v, s, *ev.dv_rank, ev.di_rank);
        on_detection(v, s, now);
        return;
      }
      ++out.stats.benign_dio_verdicts;
    }
    node.views[s] = dio.advertised_rank;
    refresh(v, now);
  }

  void on_hello(NodeId v, const HelloMessage& hello, SimTime now) {
    auto& node = nodes[v];
    if (sinkhole_active(v, now) || !runs_detection(v)) return;
    if (node.routing.blacklist.contains(hello.sender_id)) return;
    const bool warmup = now < warmup_end;
    ingest_hello(node.flood, hello, warmup);
    if (warmup) return;
    if (!node.flood.threshold) {
      node.flood.threshold = cfg.apt_threshold.adaptive
                                 ? adaptive_threshold(node.flood.warmup_samples,
                                                      cfg.apt_threshold.sigma_k)
                                 : cfg.apt_threshold.absolute;
    }
    ++out.stats.flood_checks;
    const Verdict verdict = check_flooding(node.flood.high, hello.sender_id, *node.flood.threshold);
    if (!verdict.malicious()) return;
    ++out.stats.malicious_flood_verdicts;
    out.verdicts.push_back(VerdictRecord{now, v, hello.sender_id, verdict.kind, std::nullopt,
                                         std::nullopt, verdict.flood->apt_value,
                                         verdict.flood->threshold});
    trace(TraceKind::Verdict, now, v, hello.sender_id, -1, -1);
    on_detection(v, hello.sender_id, now);
  }

  void on_report(NodeId v, const MaliciousReport& report, SimTime now) {
    send_report(v, report, now);
  }

  void on_broadcast(NodeId v, const BlacklistBroadcast& b, SimTime now) {
    if (sinkhole_active(v, now) || v == topo.root_id) return;
    auto& node = nodes[v];
    if (!accept_broadcast(node.last_broadcast, b)) return;
    const auto before_parent = node.routing.parent_id;
    const auto before_rank = node.routing.my_rank;
    std::set<NodeId> before;
    if (opts.record_events) before = node.routing.blacklist;
    const bool grew = apply_blacklist_broadcast(node.routing, *b.suspects, node.views, max_rank);
    trace(TraceKind::BroadcastApplied, now, v, kNoNode, b.sequence, grew ? 1 : 0);
    if (opts.record_events)
      for (NodeId s : node.routing.blacklist)
        if (!before.contains(s)) trace(TraceKind::Blacklisted, now, v, s, 1);
    settle(v, before_parent, before_rank, now);
    relay_broadcast(v, b, now);
  }

  // --- data plane ----------------------------------------------------------

  void handle_packet(NodeId holder, DataPacket packet, SimTime now) {
    RouteContext ctx;
    ctx.holder = holder;
    ctx.root = topo.root_id;
    ctx.now = now;
    ctx.ttl = cfg.ttl;
    ctx.timeout = timeout;
    ctx.holder_is_active_sinkhole = sinkhole_active(holder, now);
    ctx.sinkhole_mode = cfg.sinkhole_mode;
    auto decision = route_upward(packet, nodes[holder].routing, ctx);
    if (decision.kind == RouteDecision::Kind::Forward && !topo.adjacent(holder, decision.next_hop))
      decision = RouteDecision{RouteDecision::Kind::Dropped, kNoNode, DropReason::NoParent};

    auto& fate = out.fates[packet.seq];
    switch (decision.kind) {
      case RouteDecision::Kind::Delivered:
        fate.delivered_at = now;
        fate.hops = packet.hops;
        fate.last_holder = holder;
        trace(TraceKind::DataDelivered, now, holder, packet.src, static_cast<std::int64_t>(packet.seq),
              packet.hops);
        break;
      case RouteDecision::Kind::Dropped:
        fate.drop_reason = decision.reason;
        fate.hops = packet.hops;
        fate.last_holder = holder;
        trace(TraceKind::DataDropped, now, holder, packet.src, static_cast<std::int64_t>(packet.seq),
              static_cast<std::int64_t>(decision.reason));
        break;
      case RouteDecision::Kind::Forward:
        trace(TraceKind::DataForwarded, now, holder, decision.next_hop,
              static_cast<std::int64_t>(packet.seq), packet.hops);
        deliver(packet, holder, decision.next_hop, now);
        break;
    }
  }

  void on_traffic(NodeId v, SimTime now) {
    if (now + traffic_period < duration) schedule(now + traffic_period, EventKind::TrafficEmit, v);
    DataPacket p;
    p.src = v;
    p.seq = out.fates.size();
    p.emitted_at = now;
    out.fates.push_back(PacketFate{v, p.seq, now, std::nullopt, std::nullopt, v, 0});
    trace(TraceKind::DataEmitted, now, v, kNoNode, static_cast<std::int64_t>(p.seq));
    handle_packet(v, p, now);
  }

  // --- timers --------------------------------------------------------------

  void on_dio_timer(NodeId v, SimTime now) {
    if (now + dio_period < duration) schedule(now + dio_period, EventKind::TimerFire, v, TimerKind::Dio);
    if (sinkhole_active(v, now)) return;  // only lies from here on
    const auto& r = nodes[v].routing;
    if (r.my_rank.infinite()) return;
    emit_dio(v, r.my_rank, now, false);
  }

  void on_hello_timer(NodeId v, SimTime now) {
    if (now + hello_period < duration)
      schedule(now + hello_period, EventKind::TimerFire, v, TimerKind::Hello);
    auto& node = nodes[v];
    std::uint32_t count = 0;
    if (node.role == Role::Flooder) {
      count = benign_rreq_count(cfg.benign_rreq_rate, node.last_hello, std::min(now, attack_start)) +
              flooder_emit_rreqs(flooder, node.last_hello, now);
    } else {
      count = benign_rreq_count(cfg.benign_rreq_rate, node.last_hello, now);
    }
    node.last_hello = now;
    out.stats.rreq_emitted += count;
    ++out.stats.hello_sent;
    trace(TraceKind::HelloSent, now, v, kNoNode, count);
    broadcast(HelloMessage{v, count}, v, now);
  }

  void on_attack(NodeId v, SimTime now) {
    const SimTime next = now + sinkhole.attack_interval;
    if (next < duration) schedule(next, EventKind::AttackAction, v);
    if (auto dio = sinkhole_emit_dio(sinkhole, v, now)) emit_dio(v, dio->advertised_rank, now, true);
  }

  void on_mobility(SimTime now) {
    if (now + mobility_tick < duration)
      schedule(now + mobility_tick, EventKind::TimerFire, topo.root_id, TimerKind::Mobility);
    const double step = cfg.mobility_speed * cfg.mobility_tick_s;
    for (NodeId v = 0; v < topo.size(); ++v) {
      if (v == topo.root_id) continue;
      auto& p = topo.positions[v];
      auto& w = nodes[v].waypoint;
      const double dx = w.x - p.x, dy = w.y - p.y;
      const double dist = std::sqrt(dx * dx + dy * dy);
      if (dist <= step) {
        p = w;
        w = {timing.uniform(0, cfg.area.width), timing.uniform(0, cfg.area.height)};
      } else {
        p.x += dx / dist * step;
        p.y += dy / dist * step;
      }
    }
    topo.adjacency = build_adjacency_parallel(topo.positions, topo.tx_range);
    trace(TraceKind::Moved, now, topo.root_id);
    for (NodeId v = 0; v < topo.size(); ++v) {
      auto& views = nodes[v].views;
      std::erase_if(views, [&](const auto& kv) { return !topo.adjacent(v, kv.first); });
      refresh(v, now);
    }
  }

  // --- main loop -----------------------------------------------------------

  RunTranscript run() {
    init();
    while (!queue.empty()) {
      Event e = queue.pop();
      const bool data = e.kind == EventKind::MessageDelivery &&
                        std::holds_alternative<DataPacket>(e.message);
      if (e.time > duration && !data) continue;
      current_seq = e.sequence;
      ++out.stats.events_processed;
      const SimTime now = e.time;
      switch (e.kind) {
        case EventKind::TimerFire:
          last_timer = std::max(last_timer, now);
          switch (e.timer) {
            case TimerKind::Dio: on_dio_timer(e.node, now); break;
            case TimerKind::Hello: on_hello_timer(e.node, now); break;
            case TimerKind::Mobility: on_mobility(now); break;
          }
          break;
        case EventKind::TrafficEmit: on_traffic(e.node, now); break;
        case EventKind::AttackAction: on_attack(e.node, now); break;
        case EventKind::MessageDelivery:
          std::visit(
              [&](const auto& m) {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, DioMessage>) on_dio(e.node, m, now);
                else if constexpr (std::is_same_v<T, HelloMessage>) on_hello(e.node, m, now);
                else if constexpr (std::is_same_v<T, MaliciousReport>) on_report(e.node, m, now);
                else if constexpr (std::is_same_v<T, BlacklistBroadcast>) on_broadcast(e.node, m, now);
                else handle_packet(e.node, m, now);
              },
              e.message);
          break;
      }
    }
    // Periodic timers re-arm while they fall inside the run, so the last one
    // fires within one period of the end.
    const SimTime longest = std::max(dio_period, hello_period);
    if (duration.us > 0 && !topo.positions.empty() && last_timer + longest < duration)
      throw Error(ErrorCode::EngineStall, "event queue drained at " + format_seconds(last_timer) +
                                              " before the end of the run");
    for (const auto& f : out.fates)
      if (!f.delivered() && !f.drop_reason)
        throw Error(ErrorCode::EngineStall, "packet " + std::to_string(f.seq) + " has no fate");
    out.final_ranks.reserve(nodes.size());
    for (const auto& n : nodes) {
      out.final_ranks.push_back(n.routing.my_rank);
      out.final_parents.push_back(n.routing.parent_id.value_or(kNoNode));
      out.final_blacklists.emplace_back(n.routing.blacklist.begin(), n.routing.blacklist.end());
    }
    return std::move(out);
  }
};

Simulator::Simulator(ScenarioConfig cfg, Topology topology, RunOptions options)
    : impl_(std::make_unique<Impl>(std::move(cfg), std::move(topology), options)) {
  validate(impl_->cfg);
  if (impl_->topo.size() != impl_->cfg.node_count)
    throw Error(ErrorCode::InvalidConfig, "topology size does not match node_count");
}
Simulator::~Simulator() = default;
Simulator::Simulator(Simulator&&) noexcept = default;
Simulator& Simulator::operator=(Simulator&&) noexcept = default;

RunTranscript Simulator::run() { return impl_->run(); }

void Simulator::deliver(const Message& message, NodeId from, NodeId to, SimTime now) {
  impl_->deliver(message, from, to, now);
}

void Simulator::broadcast(const Message& message, NodeId from, SimTime now) {
  impl_->broadcast(message, from, now);
}

const EventQueue& Simulator::queue() const { return impl_->queue; }
const Topology& Simulator::topology() const { return impl_->topo; }

RunTranscript simulate(const ScenarioConfig& cfg, const Topology& topology, RunOptions options) {
  return Simulator(cfg, topology, options).run();
}

RunTranscript run(const ScenarioConfig& cfg, RunOptions options) {
  return simulate(cfg, generate_topology(cfg), options);
}

}  // namespace sinkguard
