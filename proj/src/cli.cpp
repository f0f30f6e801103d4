#include "sinkguard/cli.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "sinkguard/batch.hpp"
#include "sinkguard/engine.hpp"
#include "sinkguard/report.hpp"
#include "sinkguard/scenario.hpp"

namespace sinkguard {

namespace {

std::string schema_reference() {
  std::string s = "scenario keys: preset";
  for (const auto& k : config_keys()) s += ", " + k;
  s += "\npresets:";
  for (const auto& p : preset_names()) s += " " + p;
  return s;
}

void apply_overrides(ScenarioConfig& cfg, const std::vector<std::string>& sets) {
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::InvalidConfig, "--set expects key=value, got '" + kv + "'");
    set_field(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::filesystem::path ensure_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create '" + dir + "': " + ec.message());
  return p;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot write '" + p.string() + "'");
  return f;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sinkhole/flood detection experiments on a simulated RPL network"};
  app.require_subcommand(1);

  std::string scenario = "scenario3_small";
  std::optional<std::uint64_t> seed;
  std::vector<std::string> sets;
  bool trace = false;
  std::string out_dir = ".";
  auto* run_cmd = app.add_subcommand("run", "Run one scenario");
  run_cmd->add_option("--scenario", scenario, "Scenario file or preset name")->required();
  run_cmd->add_option("--seed", seed, "Override the scenario seed");
  run_cmd->add_option("--set", sets, "Override a scenario key (key=value)");
  run_cmd->add_flag("--trace", trace, "Write trace.ndjson with every event");
  run_cmd->add_option("--out", out_dir, "Output directory");

  std::string axis = "none";
  std::string values;
  std::string seeds = "1";
  bool compare = false;
  int jobs = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep");
  sweep_cmd->add_option("--scenario", scenario, "Scenario file or preset name");
  sweep_cmd->add_option("--axis", axis, "malicious_fraction | attack_interval_s | node_count")
      ->required();
  sweep_cmd->add_option("--values", values, "Comma-separated axis values")->required();
  sweep_cmd->add_option("--seeds", seeds, "Comma-separated seeds");
  sweep_cmd->add_flag("--compare-detection", compare, "Run each cell with detection on and off");
  sweep_cmd->add_option("--jobs", jobs, "Parallel cells (0: all cores)");
  sweep_cmd->add_option("--set", sets, "Override a scenario key (key=value)");
  sweep_cmd->add_option("--out", out_dir, "Output directory");

  std::string in_dir;
  std::string report_out;
  auto* report_cmd = app.add_subcommand("report", "Re-aggregate runs*.csv files");
  report_cmd->add_option("--in", in_dir, "Directory holding runs*.csv")->required();
  report_cmd->add_option("--out", report_out, "Write the aggregate here instead of stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help() << schema_reference() << "\n";
    return kExitConfig;
  }

  try {
    if (run_cmd->parsed()) {
      auto cfg = resolve_scenario(scenario);
      apply_overrides(cfg, sets);
      if (seed) cfg.seed = *seed;
      validate(cfg);
      const auto dir = ensure_dir(out_dir);
      const auto transcript = run(cfg, RunOptions{trace});
      const std::vector<RunRow> rows = {make_row(cfg, transcript)};
      {
        auto f = open_out(dir / "runs.csv");
        write_runs_csv(f, rows);
      }
      {
        auto f = open_out(dir / "verdicts.csv");
        write_verdict_csv(f, transcript);
      }
      if (trace) {
        auto f = open_out(dir / "trace.ndjson");
        write_trace(f, transcript);
      }
      write_runs_csv(out, rows);
    } else if (sweep_cmd->parsed()) {
      RunPlan plan;
      plan.base = resolve_scenario(scenario);
      apply_overrides(plan.base, sets);
      validate(plan.base);
      plan.axis = axis;
      plan.values = split_list(values);
      for (const auto& s : split_list(seeds)) {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size())
          throw Error(ErrorCode::InvalidConfig, "bad seed '" + s + "'");
        plan.seeds.push_back(v);
      }
      plan.compare_detection = compare;
      plan.output_dir = out_dir;
      plan.jobs = jobs;
      const auto cells = expand(plan);
      const auto rows = run_cells_parallel(cells, plan.jobs);
      const auto agg = aggregate(rows);
      const auto dir = ensure_dir(out_dir);
      {
        auto f = open_out(dir / "runs.csv");
        write_runs_csv(f, rows);
      }
      {
        auto f = open_out(dir / "aggregate.csv");
        write_aggregate_csv(f, agg);
      }
      write_aggregate_csv(out, agg);
    } else if (report_cmd->parsed()) {
      const auto agg = aggregate(read_runs_dir(in_dir));
      if (report_out.empty()) {
        write_aggregate_csv(out, agg);
      } else {
        auto f = open_out(report_out);
        write_aggregate_csv(f, agg);
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (e.code() == ErrorCode::InvalidConfig) {
      err << schema_reference() << "\n";
      return kExitConfig;
    }
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace sinkguard
