#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sinkguard/metrics.hpp"
#include "sinkguard/scenario.hpp"

namespace sinkguard {

/// One simulated (configuration, seed) cell and its metrics, in the shape of
/// a runs.csv row. Integer counts are authoritative; percentages are derived.
struct RunRow {
  std::string scenario;
  std::string axis = "none";
  std::string axis_value;
  std::uint64_t seed = 0;
  bool detection_enabled = true;
  std::uint32_t node_count = 0;
  double malicious_fraction = 0.0;
  double attack_interval_s = 0.0;
  double duration_s = 0.0;
  std::uint32_t packet_size_bytes = 0;
  TrafficCounts traffic;
  ConfusionMatrix cm;
  MetricsReport metrics;  // recomputed from the fields above
};

RunRow make_row(const ScenarioConfig& cfg, const RunTranscript& t, std::string axis = "none",
                std::string axis_value = {});

/// Refreshes `metrics` from the row's integer fields.
void recompute_metrics(RunRow& row);

inline const std::vector<std::string>& sweep_axes() {
  static const std::vector<std::string> axes = {"malicious_fraction", "attack_interval_s",
                                                "node_count"};
  return axes;
}

struct RunPlan {
  ScenarioConfig base;
  std::string axis = "none";
  std::vector<std::string> values;  // textual, as given on the command line
  std::vector<std::uint64_t> seeds;
  bool compare_detection = false;   // run every cell with detection on and off
  std::string output_dir = ".";
  int jobs = 0;                     // 0: OpenMP default
};

struct Cell {
  ScenarioConfig cfg;
  std::string axis;
  std::string axis_value;
};

/// Expands a plan into validated cells: values x detection settings x seeds.
/// Throws InvalidConfig for an unknown axis, an out-of-range value or no seeds.
std::vector<Cell> expand(const RunPlan& plan);

RunRow run_cell(const Cell& cell);

// Cells share nothing, so the parallel runner must match the serial one row
// for row.
std::vector<RunRow> run_cells_serial(const std::vector<Cell>& cells);
std::vector<RunRow> run_cells_parallel(const std::vector<Cell>& cells, int jobs = 0);

struct AggregateRow {
  std::string scenario;
  std::string axis;
  std::string axis_value;
  bool detection_enabled = true;
  std::uint64_t runs = 0;
  TrafficCounts total;
  ConfusionMatrix total_cm;
  std::optional<double> dr_pct, fnr_pct, fpr_pct;  // mean over runs where defined
  double pdr_pct = 0.0;
  double plr_pct = 0.0;
  double throughput_kbps = 0.0;
};

/// Groups rows by (scenario, axis, axis value, detection) in first-seen order
/// and averages per-run metrics over each group.
std::vector<AggregateRow> aggregate(const std::vector<RunRow>& rows);

}  // namespace sinkguard
