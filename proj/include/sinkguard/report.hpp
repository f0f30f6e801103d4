#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sinkguard/batch.hpp"

namespace sinkguard {

// runs.csv columns, in order:
//   scenario,axis,axis_value,seed,detection_enabled,node_count,
//   malicious_fraction,attack_interval_s,duration_s,packet_size_bytes,
//   sent,delivered,tp,fn,fp,tn,
//   dr_pct,fnr_pct,fpr_pct,pdr_pct,plr_pct,throughput_kbps
// Undefined rates are written as `undefined`. Percentages carry six decimals.
extern const char* const kRunsHeader;

// aggregate.csv columns:
//   scenario,axis,axis_value,detection_enabled,runs,sent,delivered,tp,fn,fp,tn,
//   dr_pct,fnr_pct,fpr_pct,pdr_pct,plr_pct,throughput_kbps
extern const char* const kAggregateHeader;

void write_runs_csv(std::ostream& out, const std::vector<RunRow>& rows);
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);

/// Parses a runs.csv. Derived columns are recomputed from the counts.
std::vector<RunRow> read_runs_csv(std::istream& in);

/// Reads every runs*.csv in `dir`, in file-name order.
std::vector<RunRow> read_runs_dir(const std::string& dir);

}  // namespace sinkguard
