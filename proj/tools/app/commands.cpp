#include "commands.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>

#include "ledgerage/channel.hpp"
#include "ledgerage/errors.hpp"
#include "ledgerage/rng.hpp"
#include "ledgerage/sim.hpp"

namespace ledgerage::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

channel::ChannelParams channel_params(const ExperimentConfig& c) {
  channel::ChannelParams p = c.channel.to_si();
  try {
    p.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return p;
}

// Transmission latency for a target STP; unbounded when the rate is zero.
double latency_for(const channel::ChannelParams& p, double zeta, double D_bits, double* rate_out) {
  const double rate = channel::max_rate(p, zeta);
  if (rate_out) *rate_out = rate;
  if (rate == 0.0) return kInf;
  return channel::tx_latency(D_bits, rate);
}

std::string describe(const latency::GammaParams& g) {
  std::ostringstream os;
  os << "alpha=" << format_number(g.alpha) << " beta=" << format_number(g.beta);
  return os.str();
}

struct Analytic {
  double avg_aoi;
  double p_v;
  double p_pv;
  std::string flags;
};

Analytic analyze_point(const aoi::AoiModel& model, double v, const numerics::SeriesControl& ctl) {
  if (std::isinf(model.t_tx)) return {kInf, 1.0, 1.0, "unbounded_latency"};
  Analytic out{aoi::average_aoi(model), 0.0, 0.0, ""};
  std::vector<std::string> flags;
  const aoi::Evaluation pv = aoi::aoi_violation(model, {v}, ctl);
  out.p_v = pv.value;
  if (pv.method == aoi::Method::Quadrature) flags.push_back("pv_quadrature");
  if (pv.clamped) flags.push_back("pv_clamped");
  try {
    const aoi::Evaluation ppv = aoi::paoi_violation(model, {v}, ctl);
    out.p_pv = ppv.value;
    if (ppv.clamped) flags.push_back("ppv_clamped");
  } catch (const ConvergenceError&) {
    out.p_pv = std::nan("");
    flags.push_back("ppv_nonconvergent");
  }
  if (flags.empty()) flags.push_back("series");
  for (std::size_t i = 0; i < flags.size(); ++i) out.flags += (i ? ";" : "") + flags[i];
  return out;
}

sim::SimConfig sim_config(const ExperimentConfig& c, const Resolved& r) {
  if (std::isinf(r.t_tx)) {
    throw InfiniteLatencyError("zeta = 1 gives a zero rate and unbounded transmission latency; "
                               "nothing to simulate");
  }
  sim::SimConfig s;
  s.rho_s = c.rho_s;
  s.zeta = c.zeta;
  s.t_tx = r.t_tx;
  s.gamma = r.gamma;
  s.seed = c.sim.seed;
  s.max_events = c.sim.max_events;
  if (c.sim.stop_horizon) {
    s.stop = sim::StopRule::horizon(*c.sim.stop_horizon);
  } else {
    s.stop = sim::StopRule::updates(c.sim.stop_updates.value_or(kDefaultStopUpdates));
  }
  return s;
}

sim::EmpiricalMetrics run_simulation(const ExperimentConfig& c, const sim::SimConfig& s) {
  if (c.sim.dump_path.empty()) return sim::simulate_metrics(s, c.v_grid);
  const sim::SamplePath path = sim::simulate(s);
  std::ofstream out(c.sim.dump_path);
  if (!out) throw ConfigError("cannot write sample path to '" + c.sim.dump_path + "'");
  sim::write_path_csv(out, path);
  return sim::empirical_metrics(path, c.v_grid);
}

std::vector<std::string> model_comments(const ExperimentConfig& c, const Resolved& r) {
  return {
      "gamma " + r.gamma_origin + ": " + describe(r.gamma),
      "rho_s=" + format_number(c.rho_s) + " zeta=" + format_number(c.zeta) +
          " rho=" + format_number(r.rho) + " D_bits=" + format_number(c.D_bits) +
          " rate=" + format_number(r.rate) + " t_tx=" + format_number(r.t_tx),
  };
}

}  // namespace

Resolved resolve(const ExperimentConfig& config) {
  Resolved r;
  const channel::ChannelParams ch = channel_params(config);
  r.t_tx = latency_for(ch, config.zeta, config.D_bits, &r.rate);
  r.rho = config.rho_s * config.zeta;

  const GammaSource& src = config.gamma_source;
  switch (src.kind) {
    case GammaSource::Kind::Explicit:
      r.gamma = src.params;
      r.gamma_origin = "explicit";
      break;
    case GammaSource::Kind::Table: {
      try {
        r.gamma = latency::lookup_params(src.knob, src.value).gamma;
      } catch (const NotFoundError& e) {
        throw ConfigError(std::string("gamma.value: ") + e.what());
      }
      r.gamma_origin = "table " + std::string(latency::knob_name(src.knob)) + "=" +
                       format_number(src.value);
      break;
    }
    case GammaSource::Kind::Trace: {
      std::ifstream probe(src.trace_path);
      if (!probe) throw ConfigError("gamma.trace: cannot open '" + src.trace_path + "'");
      r.gamma = latency::fit_gamma(latency::read_trace_file(src.trace_path));
      r.gamma_origin = "fitted to " + src.trace_path;
      break;
    }
  }
  try {
    r.gamma.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return r;
}

CsvTable run_analyze(const ExperimentConfig& config) {
  const Resolved r = resolve(config);
  CsvTable t;
  t.comments = model_comments(config, r);
  t.header = {"v", "avg_aoi", "p_v", "p_pv", "method_flags"};
  for (double v : config.v_grid) {
    aoi::AoiModel m{r.gamma, r.rho, r.t_tx};
    const Analytic a = analyze_point(m, v, config.series);
    t.rows.push_back({format_number(v), format_number(a.avg_aoi), format_number(a.p_v),
                      format_number(a.p_pv), a.flags});
  }
  return t;
}

CsvTable run_simulate(const ExperimentConfig& config) {
  const Resolved r = resolve(config);
  const sim::SimConfig s = sim_config(config, r);
  const sim::EmpiricalMetrics m = run_simulation(config, s);
  CsvTable t;
  t.comments = model_comments(config, r);
  t.header = {"v", "avg_aoi_sim", "p_v_sim", "p_pv_sim", "n_effective", "seed", "flags"};
  const std::string flags = m.n_effective < kLowSampleUpdates ? "low_sample" : "";
  for (std::size_t i = 0; i < m.v_grid.size(); ++i) {
    t.rows.push_back({format_number(m.v_grid[i]), format_number(m.avg_aoi), format_number(m.p_v[i]),
                      format_number(m.p_pv[i]), format_count(m.n_effective),
                      format_count(config.sim.seed), flags});
  }
  return t;
}

CsvTable run_compare(const ExperimentConfig& config) {
  const Resolved r = resolve(config);
  const sim::SimConfig s = sim_config(config, r);
  const sim::EmpiricalMetrics m = run_simulation(config, s);
  const aoi::AoiModel model = r.model();
  CsvTable t;
  t.comments = model_comments(config, r);
  t.header = {"v",          "avg_aoi",    "avg_aoi_sim", "abs_diff_avg_aoi", "avg_aoi_se",
              "p_v",        "p_v_sim",    "abs_diff_p_v", "p_v_se",          "p_pv",
              "p_pv_sim",   "abs_diff_p_pv", "p_pv_se",   "n_effective",     "seed",
              "method_flags"};
  for (std::size_t i = 0; i < m.v_grid.size(); ++i) {
    const Analytic a = analyze_point(model, m.v_grid[i], config.series);
    std::string flags = a.flags;
    if (m.n_effective < kLowSampleUpdates) flags += ";low_sample";
    t.rows.push_back({format_number(m.v_grid[i]), format_number(a.avg_aoi),
                      format_number(m.avg_aoi), format_number(std::fabs(a.avg_aoi - m.avg_aoi)),
                      format_number(m.avg_aoi_se), format_number(a.p_v), format_number(m.p_v[i]),
                      format_number(std::fabs(a.p_v - m.p_v[i])), format_number(m.p_v_se[i]),
                      format_number(a.p_pv), format_number(m.p_pv[i]),
                      format_number(std::fabs(a.p_pv - m.p_pv[i])), format_number(m.p_pv_se[i]),
                      format_count(m.n_effective), format_count(config.sim.seed), flags});
  }
  return t;
}

FitOutcome run_fit(const std::string& trace_path, std::uint64_t n_samples_critical) {
  if (n_samples_critical == 0) throw ConfigError("critical-value sample count must be positive");
  std::ifstream probe(trace_path);
  if (!probe) throw ConfigError("cannot open trace file '" + trace_path + "'");
  const latency::LatencyTrace trace = latency::read_trace_file(trace_path);
  FitOutcome out;
  out.params = latency::fit_gamma(trace);
  const double ks = latency::ks_statistic(trace, out.params);
  // Asymptotic Kolmogorov quantile at 0.01 for sample counts other than 1000.
  const double critical = n_samples_critical == 1000
                              ? latency::kKsCritical1000
                              : 1.6276 / std::sqrt(static_cast<double>(n_samples_critical));
  out.ks_pass = ks < critical;
  CsvTable& t = out.table;
  t.comments = {"trace " + trace_path};
  t.header = {"n", "alpha", "beta", "mean", "sd", "skewness", "ks_statistic", "ks_critical",
              "ks_pass"};
  t.rows.push_back({format_count(trace.size()), format_number(out.params.alpha),
                    format_number(out.params.beta), format_number(out.params.mean()),
                    format_number(out.params.sd()), format_number(out.params.skewness()),
                    format_number(ks), format_number(critical), out.ks_pass ? "pass" : "fail"});
  return out;
}

std::string gamma_snippet(const latency::GammaParams& params) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "gamma.source = explicit\ngamma.alpha = %.17g\ngamma.beta = %.17g\n",
                params.alpha, params.beta);
  return buf;
}

std::uint64_t point_seed(std::uint64_t master, double knob_value) {
  return derive_seed(master, std::bit_cast<std::uint64_t>(knob_value));
}

CsvTable run_sweep(const ExperimentConfig& config, const SweepOptions& options) {
  using latency::Knob;
  const channel::ChannelParams ch = channel_params(config);
  if (!(options.fixed_v >= 0.0)) throw ConfigError("sweep target v must be non-negative");

  std::vector<double> values;
  if (options.values) {
    values = *options.values;
  } else {
    for (const auto& row : latency::table_rows(options.knob)) {
      // The zeta = 1 row has zero rate and unbounded transmission latency.
      if (options.knob == Knob::TargetStp && row.knob_value >= 1.0) continue;
      values.push_back(row.knob_value);
    }
  }

  struct Point {
    double value;
    latency::GammaParams gamma;
    double zeta;
    double t_tx;
  };
  std::vector<Point> points;
  double config_rate = 0.0;
  const double config_t_tx = options.knob == Knob::TargetStp
                                 ? 0.0
                                 : latency_for(ch, config.zeta, config.D_bits, &config_rate);
  for (double value : values) {
    if (options.knob == Knob::TargetStp) {
      if (!(value > 0.0 && value <= 1.0)) throw ConfigError("target_stp sweep values must lie in (0, 1]");
      const auto& row = latency::nearest_row(Knob::TargetStp, value);
      points.push_back({value, row.gamma, value, latency_for(ch, value, config.D_bits, nullptr)});
    } else {
      const latency::HlfParamRow* row = nullptr;
      try {
        row = &latency::lookup_params(options.knob, value);
      } catch (const NotFoundError& e) {
        throw ConfigError(e.what());
      }
      points.push_back({value, row->gamma, config.zeta, config_t_tx});
    }
  }

  CsvTable t;
  t.comments.push_back("knob=" + std::string(latency::knob_name(options.knob)) +
                       " v=" + format_number(options.fixed_v) + " D_bits=" +
                       format_number(config.D_bits) + " rho_s=" + format_number(config.rho_s));
  if (options.knob == Knob::TargetStp) {
    t.comments.push_back("(alpha, beta) per zeta from the nearest measured target_stp row; "
                         "t_tx recomputed per zeta from the channel");
    for (const auto& p : points) {
      const auto& row = latency::nearest_row(Knob::TargetStp, p.value);
      t.comments.push_back("zeta=" + format_number(p.value) + " uses row zeta=" +
                           format_number(row.knob_value));
    }
  } else {
    t.comments.push_back("(alpha, beta) from the measured " +
                         std::string(latency::knob_name(options.knob)) + " rows; zeta=" +
                         format_number(config.zeta) + " fixes t_tx and rho");
  }
  t.header = {"knob_value", "alpha", "beta", "t_tx", "avg_aoi", "p_v", "p_pv", "method_flags"};
  if (options.simulate) {
    for (const char* h : {"avg_aoi_sim", "p_v_sim", "p_pv_sim", "n_effective", "seed"}) {
      t.header.emplace_back(h);
    }
  }

  std::vector<std::future<sim::EmpiricalMetrics>> sims;
  std::vector<std::uint64_t> seeds;
  if (options.simulate) {
    for (const auto& p : points) {
      if (std::isinf(p.t_tx)) {
        throw InfiniteLatencyError("cannot simulate target_stp = 1: transmission latency is unbounded");
      }
      sim::SimConfig s;
      s.rho_s = config.rho_s;
      s.zeta = p.zeta;
      s.t_tx = p.t_tx;
      s.gamma = p.gamma;
      s.seed = point_seed(config.sim.seed, p.value);
      s.max_events = config.sim.max_events;
      s.stop = config.sim.stop_horizon
                   ? sim::StopRule::horizon(*config.sim.stop_horizon)
                   : sim::StopRule::updates(config.sim.stop_updates.value_or(kDefaultStopUpdates));
      seeds.push_back(s.seed);
      const std::vector<double> grid{options.fixed_v};
      sims.push_back(std::async(std::launch::async,
                                [s, grid] { return sim::simulate_metrics(s, grid); }));
    }
  }

  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point& p = points[i];
    const aoi::AoiModel m{p.gamma, config.rho_s * p.zeta, p.t_tx};
    const Analytic a = analyze_point(m, options.fixed_v, config.series);
    std::vector<std::string> row{format_number(p.value),   format_number(p.gamma.alpha),
                                 format_number(p.gamma.beta), format_number(p.t_tx),
                                 format_number(a.avg_aoi), format_number(a.p_v),
                                 format_number(a.p_pv),    a.flags};
    if (options.simulate) {
      const sim::EmpiricalMetrics e = sims[i].get();
      row.push_back(format_number(e.avg_aoi));
      row.push_back(format_number(e.p_v[0]));
      row.push_back(format_number(e.p_pv[0]));
      row.push_back(format_count(e.n_effective));
      row.push_back(format_count(seeds[i]));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::vector<double> generate_trace(const latency::GammaParams& params, std::size_t n,
                                   std::uint64_t seed) {
  params.validate();
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(sim::Stream::Consensus)));
  std::vector<double> out(n);
  for (auto& x : out) x = latency::sample_latency(params, rng);
  return out;
}

}  // namespace ledgerage::cli
