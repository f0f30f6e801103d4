#include "sinkguard/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace sinkguard {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw Error(ErrorCode::InvalidConfig,
              "bad value '" + std::string(value) + "' for key '" + std::string(key) + "'");
}

double parse_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) bad_value(key, v);
  return out;
}

std::uint64_t parse_u64(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) bad_value(key, v);
  return out;
}

std::uint32_t parse_u32(std::string_view key, std::string_view v) {
  const auto x = parse_u64(key, v);
  if (x > 0xFFFFFFFFull) bad_value(key, v);
  return static_cast<std::uint32_t>(x);
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, v);
}

std::string fmt(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); }

}  // namespace

double ScenarioConfig::warmup_end() const { return std::min(0.1 * duration_s, attack_start()); }

std::uint32_t ScenarioConfig::attacker_count() const {
  return static_cast<std::uint32_t>(std::llround(malicious_fraction * node_count));
}

void validate(const ScenarioConfig& c) {
  if (c.node_count < 2) invalid("node_count must be >= 2");
  if (!(c.area.width > 0) || !(c.area.height > 0)) invalid("area must be positive");
  if (!(c.tx_range > 0)) invalid("tx_range must be > 0");
  if (!(c.malicious_fraction >= 0.0 && c.malicious_fraction < 1.0))
    invalid("malicious_fraction must be in [0,1)");
  if (c.attacker_count() > c.node_count - 1)
    invalid("malicious_fraction leaves no room for the root");
  if (!(c.duration_s >= 0)) invalid("duration_s must be >= 0");
  if (!(c.attack_interval_s >= 1e-6)) invalid("attack_interval_s must be at least 1e-6 s");
  if (c.attack_start_s && !(*c.attack_start_s >= 0)) invalid("attack_start_s must be >= 0");
  if (!(c.alpha_low > 0 && c.alpha_low <= 1)) invalid("alpha_low must be in (0,1]");
  if (!(c.alpha_high > 0 && c.alpha_high <= 1)) invalid("alpha_high must be in (0,1]");
  if (c.packet_size_bytes == 0) invalid("packet_size_bytes must be > 0");
  if (!(c.traffic_period_s > 0)) invalid("traffic_period_s must be > 0");
  if (!(c.dio_period_s > 0)) invalid("dio_period_s must be > 0");
  if (!(c.hello_period_s > 0)) invalid("hello_period_s must be > 0");
  if (!(c.hop_latency_s > 0)) invalid("hop_latency_s must be > 0");
  if (!(c.packet_timeout_s > 0)) invalid("packet_timeout_s must be > 0");
  if (c.ttl == 0) invalid("ttl must be > 0");
  if (c.flooder_count > c.attacker_count())
    invalid("flooder_count exceeds the number of attackers");
  if (!(c.benign_rreq_rate >= 0)) invalid("benign_rreq_rate must be >= 0");
  if (!(c.flooder_rreq_rate > c.benign_rreq_rate))
    invalid("flooder_rreq_rate must exceed benign_rreq_rate");
  if (c.sinkhole_advertised_rank >= Rank::kInfinite)
    invalid("sinkhole_advertised_rank out of range");
  if (!c.apt_threshold.adaptive && !(c.apt_threshold.absolute >= 0))
    invalid("apt_threshold must be 'adaptive' or a non-negative number");
  if (!(c.apt_threshold.sigma_k >= 0)) invalid("apt_sigma_k must be >= 0");
  if (c.mobility == Mobility::RandomWaypoint) {
    if (!(c.mobility_speed > 0)) invalid("mobility speed must be > 0");
    if (!(c.mobility_tick_s > 0)) invalid("mobility_tick_s must be > 0");
  }
}

std::optional<ScenarioConfig> preset(std::string_view name) {
  ScenarioConfig c;
  std::string_view base = name;
  bool small = false;
  if (constexpr std::string_view suffix = "_small";
      base.size() > suffix.size() && base.substr(base.size() - suffix.size()) == suffix) {
    base.remove_suffix(suffix.size());
    small = true;
  }
  if (base == "scenario1") {
    c.malicious_fraction = 0.10;
  } else if (base == "scenario2") {
    c.malicious_fraction = 0.20;
  } else if (base == "scenario3") {
    c.malicious_fraction = 0.30;
  } else if (base == "scenario4") {
    // Interval sweep scenario; the result tables it feeds use 30% sinkholes.
    c.malicious_fraction = 0.30;
    c.attack_interval_s = 0.05;
  } else {
    return std::nullopt;
  }
  c.name = std::string(name);
  c.area = {100.0, 100.0};
  c.tx_range = 20.0;
  c.packet_size_bytes = 512;
  c.node_count = small ? 100 : 500;
  c.duration_s = small ? 200.0 : 1000.0;
  return c;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (int i = 1; i <= 4; ++i) out.push_back("scenario" + std::to_string(i));
  for (int i = 1; i <= 4; ++i) out.push_back("scenario" + std::to_string(i) + "_small");
  return out;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "name",
      "node_count",
      "area",
      "tx_range",
      "malicious_fraction",
      "attack_interval_s",
      "attack_start_s",
      "sinkhole_advertised_rank",
      "sinkhole_mode",
      "flooder_count",
      "flooder_rreq_rate",
      "benign_rreq_rate",
      "duration_s",
      "packet_size_bytes",
      "traffic_period_s",
      "dio_period_s",
      "hello_period_s",
      "alpha_low",
      "alpha_high",
      "apt_threshold",
      "apt_sigma_k",
      "mobility",
      "mobility_tick_s",
      "hop_latency_s",
      "packet_timeout_s",
      "ttl",
      "detection_enabled",
      "seed",
  };
  return keys;
}

void set_field(ScenarioConfig& c, std::string_view key, std::string_view v) {
  if (key == "name") {
    c.name = std::string(v);
  } else if (key == "node_count") {
    c.node_count = parse_u32(key, v);
  } else if (key == "area") {
    const auto x = v.find_first_of("xX*");
    if (x == std::string_view::npos) bad_value(key, v);
    c.area.width = parse_double(key, trim(v.substr(0, x)));
    c.area.height = parse_double(key, trim(v.substr(x + 1)));
  } else if (key == "tx_range") {
    c.tx_range = parse_double(key, v);
  } else if (key == "malicious_fraction") {
    c.malicious_fraction = parse_double(key, v);
  } else if (key == "attack_interval_s") {
    c.attack_interval_s = parse_double(key, v);
  } else if (key == "attack_start_s") {
    if (v == "default")
      c.attack_start_s.reset();
    else
      c.attack_start_s = parse_double(key, v);
  } else if (key == "sinkhole_advertised_rank") {
    c.sinkhole_advertised_rank = parse_u32(key, v);
  } else if (key == "sinkhole_mode") {
    if (v == "drop")
      c.sinkhole_mode = SinkholeMode::Drop;
    else if (v == "alter")
      c.sinkhole_mode = SinkholeMode::Alter;
    else
      bad_value(key, v);
  } else if (key == "flooder_count") {
    c.flooder_count = parse_u32(key, v);
  } else if (key == "flooder_rreq_rate") {
    c.flooder_rreq_rate = parse_double(key, v);
  } else if (key == "benign_rreq_rate") {
    c.benign_rreq_rate = parse_double(key, v);
  } else if (key == "duration_s") {
    c.duration_s = parse_double(key, v);
  } else if (key == "packet_size_bytes") {
    c.packet_size_bytes = parse_u32(key, v);
  } else if (key == "traffic_period_s") {
    c.traffic_period_s = parse_double(key, v);
  } else if (key == "dio_period_s") {
    c.dio_period_s = parse_double(key, v);
  } else if (key == "hello_period_s") {
    c.hello_period_s = parse_double(key, v);
  } else if (key == "alpha_low") {
    c.alpha_low = parse_double(key, v);
  } else if (key == "alpha_high") {
    c.alpha_high = parse_double(key, v);
  } else if (key == "apt_threshold") {
    if (v == "adaptive") {
      c.apt_threshold.adaptive = true;
    } else {
      c.apt_threshold.adaptive = false;
      c.apt_threshold.absolute = parse_double(key, v);
    }
  } else if (key == "apt_sigma_k") {
    c.apt_threshold.sigma_k = parse_double(key, v);
  } else if (key == "mobility") {
    if (v == "none") {
      c.mobility = Mobility::None;
      c.mobility_speed = 0.0;
    } else if (v.starts_with("random_waypoint:")) {
      c.mobility = Mobility::RandomWaypoint;
      c.mobility_speed = parse_double(key, trim(v.substr(16)));
    } else {
      bad_value(key, v);
    }
  } else if (key == "mobility_tick_s") {
    c.mobility_tick_s = parse_double(key, v);
  } else if (key == "hop_latency_s") {
    c.hop_latency_s = parse_double(key, v);
  } else if (key == "packet_timeout_s") {
    c.packet_timeout_s = parse_double(key, v);
  } else if (key == "ttl") {
    c.ttl = parse_u32(key, v);
  } else if (key == "detection_enabled") {
    c.detection_enabled = parse_bool(key, v);
  } else if (key == "seed") {
    c.seed = parse_u64(key, v);
  } else {
    throw Error(ErrorCode::InvalidConfig,
                "unknown key '" + std::string(key) + "' (valid keys: preset, " + [] {
                  std::string all;
                  for (const auto& k : config_keys()) all += (all.empty() ? "" : ", ") + k;
                  return all;
                }() + ")");
  }
}

ScenarioConfig parse_config(std::string_view text) {
  ScenarioConfig cfg;
  bool seen_key = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      invalid("line " + std::to_string(line_no) + ": expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key == "preset") {
      if (seen_key) invalid("line " + std::to_string(line_no) + ": 'preset' must come first");
      auto p = preset(value);
      if (!p) invalid("unknown preset '" + std::string(value) + "'");
      cfg = *p;
    } else {
      set_field(cfg, key, value);
    }
    seen_key = true;
  }
  validate(cfg);
  return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot open scenario file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

ScenarioConfig resolve_scenario(const std::string& name_or_path) {
  if (auto p = preset(name_or_path)) {
    validate(*p);
    return *p;
  }
  return load_config_file(name_or_path);
}

std::string format_config(const ScenarioConfig& c) {
  std::ostringstream o;
  o << "name = " << c.name << '\n'
    << "node_count = " << c.node_count << '\n'
    << "area = " << fmt(c.area.width) << 'x' << fmt(c.area.height) << '\n'
    << "tx_range = " << fmt(c.tx_range) << '\n'
    << "malicious_fraction = " << fmt(c.malicious_fraction) << '\n'
    << "attack_interval_s = " << fmt(c.attack_interval_s) << '\n'
    << "attack_start_s = " << (c.attack_start_s ? fmt(*c.attack_start_s) : "default") << '\n'
    << "sinkhole_advertised_rank = " << c.sinkhole_advertised_rank << '\n'
    << "sinkhole_mode = " << (c.sinkhole_mode == SinkholeMode::Drop ? "drop" : "alter") << '\n'
    << "flooder_count = " << c.flooder_count << '\n'
    << "flooder_rreq_rate = " << fmt(c.flooder_rreq_rate) << '\n'
    << "benign_rreq_rate = " << fmt(c.benign_rreq_rate) << '\n'
    << "duration_s = " << fmt(c.duration_s) << '\n'
    << "packet_size_bytes = " << c.packet_size_bytes << '\n'
    << "traffic_period_s = " << fmt(c.traffic_period_s) << '\n'
    << "dio_period_s = " << fmt(c.dio_period_s) << '\n'
    << "hello_period_s = " << fmt(c.hello_period_s) << '\n'
    << "alpha_low = " << fmt(c.alpha_low) << '\n'
    << "alpha_high = " << fmt(c.alpha_high) << '\n'
    << "apt_threshold = "
    << (c.apt_threshold.adaptive ? std::string("adaptive") : fmt(c.apt_threshold.absolute)) << '\n'
    << "apt_sigma_k = " << fmt(c.apt_threshold.sigma_k) << '\n'
    << "mobility = "
    << (c.mobility == Mobility::None ? std::string("none")
                                     : "random_waypoint:" + fmt(c.mobility_speed))
    << '\n'
    << "mobility_tick_s = " << fmt(c.mobility_tick_s) << '\n'
    << "hop_latency_s = " << fmt(c.hop_latency_s) << '\n'
    << "packet_timeout_s = " << fmt(c.packet_timeout_s) << '\n'
    << "ttl = " << c.ttl << '\n'
    << "detection_enabled = " << (c.detection_enabled ? "true" : "false") << '\n'
    << "seed = " << c.seed << '\n';
  return o.str();
}

}  // namespace sinkguard
