#pragma once

#include <cstdint>
#include <memory>
#include <queue>
#include <vector>

#include "sinkguard/messages.hpp"
#include "sinkguard/scenario.hpp"
#include "sinkguard/topology.hpp"
#include "sinkguard/transcript.hpp"

namespace sinkguard {

enum class EventKind { TimerFire, MessageDelivery, TrafficEmit, AttackAction };
enum class TimerKind { Dio, Hello, Mobility };

struct Event {
  SimTime time{};
  std::uint64_t sequence = 0;
  EventKind kind = EventKind::TimerFire;
  TimerKind timer = TimerKind::Dio;
  NodeId node = kNoNode;  // target
  NodeId from = kNoNode;  // sender, for deliveries
  Message message{};
};

/// Min-queue on (time, sequence). Sequence numbers are assigned on push, so
/// simultaneous events run in insertion order.
class EventQueue {
 public:
  /// Throws EngineStall if `e.time` precedes the current clock.
  std::uint64_t push(Event e);
  Event pop();
  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  SimTime now() const { return now_; }
  std::vector<Event> pending() const;  // sorted in execution order

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.sequence > b.sequence;
    }
  };
  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t next_sequence_ = 0;
  SimTime now_{};
};

struct RunOptions {
  bool record_events = false;
};

/// One simulation run over a fixed topology. Single-threaded; owns all state.
class Simulator {
 public:
  Simulator(ScenarioConfig cfg, Topology topology, RunOptions options = {});
  ~Simulator();
  Simulator(Simulator&&) noexcept;
  Simulator& operator=(Simulator&&) noexcept;

  RunTranscript run();

  /// Schedules a delivery at now + hop latency. Throws NotAdjacent.
  void deliver(const Message& message, NodeId from, NodeId to, SimTime now);
  /// One delivery per neighbor of `from`, all at the same timestamp.
  void broadcast(const Message& message, NodeId from, SimTime now);

  const EventQueue& queue() const;
  const Topology& topology() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// generate_topology + simulate.
RunTranscript run(const ScenarioConfig& cfg, RunOptions options = {});
RunTranscript simulate(const ScenarioConfig& cfg, const Topology& topology,
                       RunOptions options = {});

}  // namespace sinkguard
