#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sinkguard/types.hpp"

namespace sinkguard {

struct Area {
  double width = 100.0;
  double height = 100.0;
};

enum class Mobility { None, RandomWaypoint };

enum class SinkholeMode { Drop, Alter };

/// Flood threshold: adaptive (mean + k*stddev of warm-up hello counts) or a
/// fixed absolute value.
struct ThresholdPolicy {
  bool adaptive = true;
  double absolute = 0.0;
  double sigma_k = 3.0;
};

struct ScenarioConfig {
  std::string name = "custom";

  std::uint32_t node_count = 500;
  Area area{};
  double tx_range = 20.0;
  double malicious_fraction = 0.0;

  // attackers
  double attack_interval_s = 1.0;
  std::optional<double> attack_start_s;  // unset: 10% of duration
  std::uint32_t sinkhole_advertised_rank = 0;
  SinkholeMode sinkhole_mode = SinkholeMode::Drop;
  std::uint32_t flooder_count = 0;
  double flooder_rreq_rate = 10.0;
  double benign_rreq_rate = 1.0;

  double duration_s = 1000.0;
  std::uint32_t packet_size_bytes = 512;
  double traffic_period_s = 1.0;  // CBR, every benign non-root node toward the root

  double dio_period_s = 10.0;
  double hello_period_s = 1.0;
  double alpha_low = 0.3;
  double alpha_high = 0.8;
  ThresholdPolicy apt_threshold{};

  Mobility mobility = Mobility::None;
  double mobility_speed = 0.0;  // m/s, random waypoint only
  double mobility_tick_s = 1.0;

  double hop_latency_s = 0.005;
  double packet_timeout_s = 5.0;
  std::uint32_t ttl = 64;

  bool detection_enabled = true;
  std::uint64_t seed = 1;

  double attack_start() const { return attack_start_s.value_or(0.1 * duration_s); }
  /// End of the attack-free calibration window for the adaptive flood threshold.
  double warmup_end() const;
  std::uint32_t attacker_count() const;
};

/// Throws Error{InvalidConfig} naming the offending field.
void validate(const ScenarioConfig& cfg);

/// Full-size presets `scenario1`..`scenario4` (500 nodes, 1000 s) and desk-scale
/// `scenario1_small`..`scenario4_small` (100 nodes, 200 s).
std::optional<ScenarioConfig> preset(std::string_view name);
std::vector<std::string> preset_names();

/// Parses `key = value` lines. `#` starts a comment. A `preset = <name>` line,
/// if present, must come first and seeds the remaining keys. Unknown keys and
/// malformed values raise InvalidConfig; the result is validated.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config_file(const std::string& path);

/// Resolves a preset name or a path to a scenario file.
ScenarioConfig resolve_scenario(const std::string& name_or_path);

/// Writes every key in a form parse_config accepts.
std::string format_config(const ScenarioConfig& cfg);

/// Sets a single field from its textual value (shared by the parser and sweeps).
void set_field(ScenarioConfig& cfg, std::string_view key, std::string_view value);

const std::vector<std::string>& config_keys();

}  // namespace sinkguard
