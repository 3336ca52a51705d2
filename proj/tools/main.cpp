#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "app/commands.hpp"
#include "app/config.hpp"
#include "app/csv.hpp"
#include "ledgerage/errors.hpp"
#include "ledgerage/latency.hpp"

namespace {

using namespace ledgerage;
using namespace ledgerage::cli;

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string v_grid;
  std::optional<std::uint64_t> stop_updates;
  std::optional<double> stop_horizon;
  std::string dump_path;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool sim_flags) {
  cmd->add_option("-c,--config", o.config_path, "Config file (key = value lines)");
  cmd->add_option("--set", o.sets, "Override a config key, key=value (repeatable)");
  cmd->add_option("--seed", o.seed, "Master seed (default: $LEDGERAGE_SEED, else 1)");
  cmd->add_option("-o,--out", o.out, "Output CSV path (default: stdout)");
  cmd->add_option("--v-grid", o.v_grid, "Comma-separated target AoI values");
  if (sim_flags) {
    cmd->add_option("--stop-updates", o.stop_updates, "Stop after this many effective updates");
    cmd->add_option("--stop-horizon", o.stop_horizon, "Stop generating at this simulated time");
    cmd->add_option("--dump-path", o.dump_path, "Write the simulated sample path here");
  }
}

ExperimentConfig load(const CommonOptions& o) {
  ConfigMap map;
  if (!o.config_path.empty()) map = read_config_file(o.config_path);
  for (const auto& s : o.sets) apply_override(map, s);
  if (o.seed) map["sim.seed"] = std::to_string(*o.seed);
  if (!o.v_grid.empty()) map["v_grid"] = o.v_grid;
  if (o.stop_updates) {
    map["sim.stop_updates"] = std::to_string(*o.stop_updates);
    map.erase("sim.stop_horizon");
  }
  if (o.stop_horizon) {
    map["sim.stop_horizon"] = format_number(*o.stop_horizon);
    map.erase("sim.stop_updates");
  }
  if (!o.dump_path.empty()) map["sim.dump_path"] = o.dump_path;
  if (!o.out.empty()) map["output"] = o.out;
  return build_config(map, seed_from_env(1));
}

void emit(const CsvTable& table, const std::string& path) {
  if (path.empty() || path == "-") {
    table.write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write output file '" + path + "'");
  table.write(out);
}

int run(int argc, char** argv) {
  CLI::App app{"Age-of-information analysis and simulation for blockchain-enabled monitoring"};
  app.require_subcommand(1);

  CommonOptions analyze_opts, simulate_opts, compare_opts, sweep_opts;
  auto* analyze = app.add_subcommand("analyze", "Closed-form avg AoI, P_v and P_pv over v_grid");
  add_common(analyze, analyze_opts, false);
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates over v_grid");
  add_common(simulate, simulate_opts, true);
  auto* compare = app.add_subcommand("compare", "Analysis and simulation side by side");
  add_common(compare, compare_opts, true);

  auto* sweep = app.add_subcommand("sweep", "Metrics at fixed v across measured knob values");
  add_common(sweep, sweep_opts, true);
  std::string knob_name = "target_stp";
  double sweep_v = 5.5;
  std::string sweep_values;
  bool sweep_simulate = false;
  sweep->add_option("--knob", knob_name, "target_stp, block_size or timeout");
  sweep->add_option("--v", sweep_v, "Target AoI");
  sweep->add_option("--values", sweep_values, "Comma-separated knob values (default: table rows)");
  sweep->add_flag("--simulate", sweep_simulate, "Add simulated columns");

  auto* fit = app.add_subcommand("fit", "Fit Gamma(alpha, beta) to a latency trace");
  std::string trace_path, fit_out, emit_config;
  std::uint64_t critical_n = 1000;
  fit->add_option("trace", trace_path, "Trace file, one latency per line")->required();
  fit->add_option("-o,--out", fit_out, "Output CSV path (default: stdout)");
  fit->add_option("--critical-n", critical_n, "Sample count for the KS critical value");
  fit->add_option("--emit-config", emit_config, "Write a gamma config snippet here");

  auto* gen = app.add_subcommand("gen-trace", "Write a synthetic Gamma latency trace");
  double gen_alpha = 0.0, gen_beta = 0.0, gen_row = -1.0;
  std::string gen_knob = "target_stp", gen_out;
  std::size_t gen_n = 1000;
  std::optional<std::uint64_t> gen_seed;
  auto* alpha_opt = gen->add_option("--alpha", gen_alpha, "Shape");
  auto* beta_opt = gen->add_option("--beta", gen_beta, "Rate");
  alpha_opt->needs(beta_opt);
  beta_opt->needs(alpha_opt);
  auto* row_opt = gen->add_option("--row", gen_row, "Take (alpha, beta) from this table row value");
  row_opt->excludes(alpha_opt);
  gen->add_option("--knob", gen_knob, "Table for --row");
  gen->add_option("-n", gen_n, "Number of samples");
  gen->add_option("--seed", gen_seed, "Seed (default: $LEDGERAGE_SEED, else 1)");
  gen->add_option("-o,--out", gen_out, "Output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (analyze->parsed()) {
    const ExperimentConfig c = load(analyze_opts);
    emit(run_analyze(c), c.output);
  } else if (simulate->parsed()) {
    const ExperimentConfig c = load(simulate_opts);
    emit(run_simulate(c), c.output);
  } else if (compare->parsed()) {
    const ExperimentConfig c = load(compare_opts);
    emit(run_compare(c), c.output);
  } else if (sweep->parsed()) {
    const ExperimentConfig c = load(sweep_opts);
    SweepOptions so;
    try {
      so.knob = latency::parse_knob(knob_name);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("--knob: ") + e.what());
    }
    so.fixed_v = sweep_v;
    if (!sweep_values.empty()) so.values = parse_number_list(sweep_values, "--values");
    so.simulate = sweep_simulate;
    emit(run_sweep(c, so), c.output);
  } else if (fit->parsed()) {
    const FitOutcome f = run_fit(trace_path, critical_n);
    emit(f.table, fit_out);
    if (!emit_config.empty()) {
      std::ofstream out(emit_config);
      if (!out) throw ConfigError("cannot write '" + emit_config + "'");
      out << gamma_snippet(f.params);
    }
  } else if (gen->parsed()) {
    latency::GammaParams g{gen_alpha, gen_beta};
    if (*row_opt) {
      try {
        g = latency::lookup_params(latency::parse_knob(gen_knob), gen_row).gamma;
      } catch (const Error& e) {
        throw ConfigError(e.what());
      }
    } else if (!*alpha_opt) {
      throw ConfigError("gen-trace needs --alpha/--beta or --row");
    }
    try {
      g.validate();
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
    const auto samples = generate_trace(g, gen_n, gen_seed.value_or(seed_from_env(1)));
    if (gen_out.empty() || gen_out == "-") {
      latency::write_trace(std::cout, samples);
    } else {
      std::ofstream out(gen_out);
      if (!out) throw ConfigError("cannot write '" + gen_out + "'");
      latency::write_trace(out, samples);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
