#include "sinkguard/transcript.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "json.hpp"

namespace sinkguard {

namespace {

std::string fmt_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

const char* role_name(Role r) {
  switch (r) {
    case Role::Benign: return "benign";
    case Role::Sinkhole: return "sinkhole";
    case Role::Flooder: return "flooder";
  }
  return "unknown";
}

}  // namespace

const char* to_string(TraceKind k) {
  switch (k) {
    case TraceKind::DioSent: return "dio_tx";
    case TraceKind::DioReceived: return "dio_rx";
    case TraceKind::DioIgnored: return "dio_ignored";
    case TraceKind::HelloSent: return "hello_tx";
    case TraceKind::DataEmitted: return "data_emit";
    case TraceKind::DataForwarded: return "data_fwd";
    case TraceKind::DataDelivered: return "data_delivered";
    case TraceKind::DataDropped: return "data_dropped";
    case TraceKind::ReportSent: return "report_tx";
    case TraceKind::ReportForwarded: return "report_fwd";
    case TraceKind::ReportQueued: return "report_queued";
    case TraceKind::ReportDropped: return "report_dropped";
    case TraceKind::ReportArrived: return "report_at_root";
    case TraceKind::BroadcastSent: return "broadcast_tx";
    case TraceKind::BroadcastApplied: return "broadcast_applied";
    case TraceKind::ParentChanged: return "parent_changed";
    case TraceKind::Blacklisted: return "blacklisted";
    case TraceKind::Verdict: return "verdict";
    case TraceKind::Moved: return "moved";
  }
  return "unknown";
}

std::uint64_t RunTranscript::delivered() const {
  std::uint64_t n = 0;
  for (const auto& f : fates) n += f.delivered() ? 1 : 0;
  return n;
}

std::array<std::uint64_t, kDropReasonCount> RunTranscript::drops_by_reason() const {
  std::array<std::uint64_t, kDropReasonCount> out{};
  for (const auto& f : fates)
    if (f.drop_reason) ++out[static_cast<std::size_t>(*f.drop_reason)];
  return out;
}

void write_verdict_csv(std::ostream& out, const RunTranscript& t) {
  out << "time_s,receiver,sender,kind,dv_rank,di_rank,apt_value,threshold\n";
  for (const auto& v : t.verdicts) {
    out << format_seconds(v.time) << ',' << v.receiver << ',' << v.sender << ','
        << to_string(v.kind) << ',' << (v.dv_rank ? std::to_string(*v.dv_rank) : "") << ','
        << (v.di_rank ? std::to_string(*v.di_rank) : "") << ','
        << (v.apt_value ? fmt_double(*v.apt_value) : "") << ','
        << (v.threshold ? fmt_double(*v.threshold) : "") << '\n';
  }
}

void write_trace(std::ostream& out, const RunTranscript& t) {
  using nlohmann::ordered_json;
  ordered_json header;
  header["record"] = "header";
  header["scenario"] = t.config.name;
  header["seed"] = t.config.seed;
  header["root"] = t.root_id;
  ordered_json roles = ordered_json::array();
  for (NodeId i = 0; i < t.roles.size(); ++i)
    if (t.roles[i] != Role::Benign) roles.push_back({{"node", i}, {"role", role_name(t.roles[i])}});
  header["attackers"] = roles;
  out << header.dump() << '\n';

  for (const auto& e : t.events) {
    ordered_json r;
    r["record"] = "event";
    r["t"] = format_seconds(e.time);
    r["seq"] = e.seq;
    r["ev"] = to_string(e.kind);
    r["node"] = e.node;
    if (e.peer != kNoNode) r["peer"] = e.peer;
    r["a"] = e.a;
    r["b"] = e.b;
    out << r.dump() << '\n';
  }
  for (const auto& f : t.fates) {
    ordered_json r;
    r["record"] = "fate";
    r["src"] = f.src;
    r["seq"] = f.seq;
    r["emitted"] = format_seconds(f.emitted_at);
    if (f.delivered_at) r["delivered"] = format_seconds(*f.delivered_at);
    if (f.drop_reason) r["dropped"] = to_string(*f.drop_reason);
    r["hops"] = f.hops;
    out << r.dump() << '\n';
  }
  for (const auto& [suspect, when] : t.root_blacklist) {
    ordered_json r;
    r["record"] = "root_blacklist";
    r["node"] = suspect;
    r["t"] = format_seconds(when);
    out << r.dump() << '\n';
  }
}

}  // namespace sinkguard
