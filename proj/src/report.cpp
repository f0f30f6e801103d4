#include "sinkguard/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace sinkguard {

const char* const kRunsHeader =
    "scenario,axis,axis_value,seed,detection_enabled,node_count,malicious_fraction,"
    "attack_interval_s,duration_s,packet_size_bytes,sent,delivered,tp,fn,fp,tn,"
    "dr_pct,fnr_pct,fpr_pct,pdr_pct,plr_pct,throughput_kbps";

const char* const kAggregateHeader =
    "scenario,axis,axis_value,detection_enabled,runs,sent,delivered,tp,fn,fp,tn,"
    "dr_pct,fnr_pct,fpr_pct,pdr_pct,plr_pct,throughput_kbps";

namespace {

std::string pct(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string pct(const std::optional<double>& x) { return x ? pct(*x) : "undefined"; }

std::string shortest(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

template <typename T>
T number(const std::string& s, const char* column) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw Error(ErrorCode::Io, std::string("bad ") + column + " value '" + s + "'");
  return v;
}

}  // namespace

void write_runs_csv(std::ostream& out, const std::vector<RunRow>& rows) {
  out << kRunsHeader << '\n';
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    out << r.scenario << ',' << r.axis << ',' << r.axis_value << ',' << r.seed << ','
        << (r.detection_enabled ? "true" : "false") << ',' << r.node_count << ','
        << shortest(r.malicious_fraction) << ',' << shortest(r.attack_interval_s) << ','
        << shortest(r.duration_s) << ',' << r.packet_size_bytes << ',' << r.traffic.sent << ','
        << r.traffic.received << ',' << r.cm.tp << ',' << r.cm.fn << ',' << r.cm.fp << ','
        << r.cm.tn << ',' << pct(m.dr_pct) << ',' << pct(m.fnr_pct) << ',' << pct(m.fpr_pct)
        << ',' << pct(m.pdr_pct) << ',' << pct(m.plr_pct) << ',' << pct(m.throughput_kbps)
        << '\n';
  }
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << kAggregateHeader << '\n';
  for (const auto& r : rows) {
    out << r.scenario << ',' << r.axis << ',' << r.axis_value << ','
        << (r.detection_enabled ? "true" : "false") << ',' << r.runs << ',' << r.total.sent << ','
        << r.total.received << ',' << r.total_cm.tp << ',' << r.total_cm.fn << ','
        << r.total_cm.fp << ',' << r.total_cm.tn << ',' << pct(r.dr_pct) << ','
        << pct(r.fnr_pct) << ',' << pct(r.fpr_pct) << ',' << pct(r.pdr_pct) << ','
        << pct(r.plr_pct) << ',' << pct(r.throughput_kbps) << '\n';
  }
}

std::vector<RunRow> read_runs_csv(std::istream& in) {
  std::vector<RunRow> rows;
  std::string line;
  if (!std::getline(in, line)) return rows;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRunsHeader) throw Error(ErrorCode::Io, "unexpected runs.csv header");
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = split(line);
    if (f.size() != 22) throw Error(ErrorCode::Io, "runs.csv row has " + std::to_string(f.size()) + " fields");
    RunRow r;
    r.scenario = f[0];
    r.axis = f[1];
    r.axis_value = f[2];
    r.seed = number<std::uint64_t>(f[3], "seed");
    r.detection_enabled = f[4] == "true";
    r.node_count = number<std::uint32_t>(f[5], "node_count");
    r.malicious_fraction = number<double>(f[6], "malicious_fraction");
    r.attack_interval_s = number<double>(f[7], "attack_interval_s");
    r.duration_s = number<double>(f[8], "duration_s");
    r.packet_size_bytes = number<std::uint32_t>(f[9], "packet_size_bytes");
    r.traffic.sent = number<std::uint64_t>(f[10], "sent");
    r.traffic.received = number<std::uint64_t>(f[11], "delivered");
    r.cm.tp = number<std::uint64_t>(f[12], "tp");
    r.cm.fn = number<std::uint64_t>(f[13], "fn");
    r.cm.fp = number<std::uint64_t>(f[14], "fp");
    r.cm.tn = number<std::uint64_t>(f[15], "tn");
    recompute_metrics(r);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<RunRow> read_runs_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::Io, "'" + dir + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.starts_with("runs") && name.ends_with(".csv"))
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<RunRow> rows;
  for (const auto& p : files) {
    std::ifstream in(p);
    auto part = read_runs_csv(in);
    rows.insert(rows.end(), std::make_move_iterator(part.begin()),
                std::make_move_iterator(part.end()));
  }
  return rows;
}

}  // namespace sinkguard
