#include "sinkguard/batch.hpp"

#include <exception>
#include <map>
#include <tuple>

#include "sinkguard/engine.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sinkguard {

RunRow make_row(const ScenarioConfig& cfg, const RunTranscript& t, std::string axis,
                std::string axis_value) {
  RunRow row;
  row.scenario = cfg.name;
  row.axis = std::move(axis);
  row.axis_value = std::move(axis_value);
  row.seed = cfg.seed;
  row.detection_enabled = cfg.detection_enabled;
  row.node_count = cfg.node_count;
  row.malicious_fraction = cfg.malicious_fraction;
  row.attack_interval_s = cfg.attack_interval_s;
  row.duration_s = cfg.duration_s;
  row.packet_size_bytes = cfg.packet_size_bytes;
  row.traffic = traffic_counts(t);
  row.cm = confusion_matrix(t);
  recompute_metrics(row);
  return row;
}

void recompute_metrics(RunRow& row) {
  auto& m = row.metrics;
  m.cm = row.cm;
  m.traffic = row.traffic;
  const auto rates = detection_rates(row.cm);
  m.dr_pct = rates.dr_pct;
  m.fnr_pct = rates.fnr_pct;
  m.fpr_pct = rates.fpr_pct;
  if (row.traffic.sent > 0) {
    const TrafficCounts one[] = {row.traffic};
    m.pdr_pct = pdr(one);
    m.plr_pct = plr(one);
  } else {
    m.pdr_pct = 0.0;
    m.plr_pct = 100.0;
  }
  const std::uint64_t delivered[] = {row.traffic.received};
  m.throughput_kbps = row.duration_s > 0
                          ? throughput_kbps(delivered, row.packet_size_bytes, 0.0, row.duration_s)
                          : 0.0;
}

std::vector<Cell> expand(const RunPlan& plan) {
  if (plan.seeds.empty()) throw Error(ErrorCode::InvalidConfig, "a plan needs at least one seed");
  std::vector<std::string> values = plan.values;
  if (plan.axis == "none") {
    values = {""};
  } else {
    bool known = false;
    for (const auto& a : sweep_axes()) known |= a == plan.axis;
    if (!known)
      throw Error(ErrorCode::InvalidConfig,
                  "unknown sweep axis '" + plan.axis +
                      "' (expected malicious_fraction, attack_interval_s or node_count)");
    if (values.empty()) throw Error(ErrorCode::InvalidConfig, "sweep needs at least one value");
  }
  std::vector<bool> detection = {plan.base.detection_enabled};
  if (plan.compare_detection) detection = {true, false};

  std::vector<Cell> cells;
  for (const auto& value : values) {
    for (bool det : detection) {
      for (auto seed : plan.seeds) {
        Cell c{plan.base, plan.axis, value};
        if (plan.axis != "none") set_field(c.cfg, plan.axis, value);
        c.cfg.detection_enabled = det;
        c.cfg.seed = seed;
        validate(c.cfg);
        cells.push_back(std::move(c));
      }
    }
  }
  return cells;
}

RunRow run_cell(const Cell& cell) {
  const auto transcript = run(cell.cfg);
  return make_row(cell.cfg, transcript, cell.axis, cell.axis_value);
}

std::vector<RunRow> run_cells_serial(const std::vector<Cell>& cells) {
  std::vector<RunRow> rows;
  rows.reserve(cells.size());
  for (const auto& c : cells) rows.push_back(run_cell(c));
  return rows;
}

std::vector<RunRow> run_cells_parallel(const std::vector<Cell>& cells, int jobs) {
  std::vector<RunRow> rows(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  const auto n = static_cast<std::int64_t>(cells.size());
#ifdef _OPENMP
  if (jobs <= 0) jobs = omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs)
#endif
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      rows[static_cast<std::size_t>(i)] = run_cell(cells[static_cast<std::size_t>(i)]);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  (void)jobs;
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

std::vector<AggregateRow> aggregate(const std::vector<RunRow>& rows) {
  struct Acc {
    AggregateRow row;
    std::vector<TrafficCounts> traffic;
    double dr = 0, fnr = 0, fpr = 0, thr = 0;
    std::uint64_t dr_n = 0, fpr_n = 0;
  };
  using Key = std::tuple<std::string, std::string, std::string, bool>;
  std::map<Key, std::size_t> index;
  std::vector<Acc> accs;
  for (const auto& r : rows) {
    const Key key{r.scenario, r.axis, r.axis_value, r.detection_enabled};
    auto [it, fresh] = index.emplace(key, accs.size());
    if (fresh) {
      Acc a;
      a.row.scenario = r.scenario;
      a.row.axis = r.axis;
      a.row.axis_value = r.axis_value;
      a.row.detection_enabled = r.detection_enabled;
      accs.push_back(std::move(a));
    }
    auto& a = accs[it->second];
    ++a.row.runs;
    a.row.total.sent += r.traffic.sent;
    a.row.total.received += r.traffic.received;
    a.row.total_cm.tp += r.cm.tp;
    a.row.total_cm.fn += r.cm.fn;
    a.row.total_cm.fp += r.cm.fp;
    a.row.total_cm.tn += r.cm.tn;
    a.traffic.push_back(r.traffic);
    const auto rates = detection_rates(r.cm);
    if (rates.dr_pct) {
      a.dr += *rates.dr_pct;
      a.fnr += *rates.fnr_pct;
      ++a.dr_n;
    }
    if (rates.fpr_pct) {
      a.fpr += *rates.fpr_pct;
      ++a.fpr_n;
    }
    const std::uint64_t delivered[] = {r.traffic.received};
    a.thr += r.duration_s > 0 ? throughput_kbps(delivered, r.packet_size_bytes, 0.0, r.duration_s)
                              : 0.0;
  }

  std::vector<AggregateRow> out;
  out.reserve(accs.size());
  for (auto& a : accs) {
    auto& row = a.row;
    if (a.dr_n > 0) {
      row.dr_pct = a.dr / static_cast<double>(a.dr_n);
      row.fnr_pct = a.fnr / static_cast<double>(a.dr_n);
    }
    if (a.fpr_n > 0) row.fpr_pct = a.fpr / static_cast<double>(a.fpr_n);
    bool any_empty = false;
    for (const auto& t : a.traffic) any_empty |= t.sent == 0;
    if (!any_empty) {
      row.pdr_pct = pdr(a.traffic);
      row.plr_pct = plr(a.traffic);
    } else {
      row.pdr_pct = 0.0;
      row.plr_pct = 100.0;
    }
    row.throughput_kbps = a.thr / static_cast<double>(row.runs);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace sinkguard
