#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "ledgerage/errors.hpp"
#include "ledgerage/latency.hpp"
#include "ledgerage/sim.hpp"

using namespace ledgerage;
using namespace ledgerage::sim;

namespace {

SimConfig default_config(std::uint64_t updates, std::uint64_t seed = 1) {
  SimConfig c;
  c.t_tx = 0.2635;
  c.stop = StopRule::updates(updates);
  c.seed = seed;
  return c;
}

SamplePath hand_path() {
  SamplePath p;
  p.updates = {{0.0, 0.1, 1.0}, {1.5, 1.6, 2.0}, {2.5, 2.6, 4.0}};
  p.arrivals = 4;
  p.invalid_count = 1;
  p.total_time = 4.0;
  return p;
}

// CDF of X + Exp(rho) on a uniform grid by cumulative trapezoid.
struct ConvolutionCdf {
  double h;
  std::vector<double> values;

  ConvolutionCdf(const latency::GammaParams& g, double rho, double t_max, int steps)
      : h(t_max / steps), values(steps + 1, 0.0) {
    double weighted = 0.0;
    double prev = 0.0;
    for (int i = 1; i <= steps; ++i) {
      const double t = i * h;
      const double cur = latency::gamma_pdf(g, t) * std::exp(rho * t);
      weighted += 0.5 * h * (prev + cur);
      prev = cur;
      values[i] = latency::gamma_cdf(g, t) - std::exp(-rho * t) * weighted;
    }
  }

  double operator()(double t) const {
    const double pos = t / h;
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= values.size()) return 1.0;
    const double f = pos - i;
    return values[i] * (1 - f) + values[i + 1] * f;
  }
};

}  // namespace

TEST(Simulate, Deterministic) {
  const SamplePath a = simulate(default_config(2000, 5));
  const SamplePath b = simulate(default_config(2000, 5));
  ASSERT_EQ(a.updates.size(), b.updates.size());
  for (std::size_t i = 0; i < a.updates.size(); ++i) {
    EXPECT_EQ(a.updates[i].G, b.updates[i].G);
    EXPECT_EQ(a.updates[i].U, b.updates[i].U);
  }
  EXPECT_EQ(a.invalid_count, b.invalid_count);
  const SamplePath c = simulate(default_config(2000, 6));
  EXPECT_NE(a.updates.back().U, c.updates.back().U);
}

TEST(Simulate, PathInvariants) {
  const SimConfig cfg = default_config(20000);
  const SamplePath p = simulate(cfg);
  ASSERT_EQ(p.updates.size(), 20000u);
  EXPECT_EQ(p.updates.size() + p.invalid_count, p.arrivals);
  for (std::size_t k = 0; k < p.updates.size(); ++k) {
    const Update& u = p.updates[k];
    EXPECT_LT(u.G, u.A);
    EXPECT_LT(u.A, u.U);
    EXPECT_NEAR(u.A - u.G, cfg.t_tx, 1e-9);
    if (k > 0) {
      EXPECT_GT(u.U, p.updates[k - 1].U);
      EXPECT_GE(u.A, p.updates[k - 1].U);
    }
  }
  EXPECT_EQ(p.total_time, p.updates.back().U);
}

TEST(Simulate, StreamCountsMatchPath) {
  const SimConfig cfg = default_config(3000, 9);
  std::uint64_t seen = 0;
  const RunCounts c = simulate_stream(cfg, [&](const Update&) { ++seen; });
  const SamplePath p = simulate(cfg);
  EXPECT_EQ(seen, c.effective);
  EXPECT_EQ(c.effective, p.updates.size());
  EXPECT_EQ(c.invalid, p.invalid_count);
  EXPECT_EQ(c.effective + c.invalid, c.arrivals);
  EXPECT_GE(c.generated, c.arrivals);
}

TEST(Simulate, InstantConsensusAcceptsEverything) {
  SimConfig c;
  c.rho_s = 2.0;
  c.zeta = 1.0;
  c.gamma = {1.0, 1e9};
  c.stop = StopRule::horizon(2e5);
  const SamplePath p = simulate(c);
  EXPECT_EQ(p.invalid_count, 0u);
  const double mean_gap = (p.updates.back().U - p.updates.front().U) / (p.updates.size() - 1);
  EXPECT_NEAR(mean_gap, 0.5, 0.005);
  EXPECT_LT(p.updates.back().G, 2e5);
}

TEST(Simulate, EffectiveGapsFollowLatencyPlusExponential) {
  const SimConfig cfg = default_config(100000, 21);
  const SamplePath p = simulate(cfg);
  std::vector<double> gaps;
  for (std::size_t k = 1; k < p.updates.size(); ++k) {
    gaps.push_back(p.updates[k].G - p.updates[k - 1].G);
  }
  std::sort(gaps.begin(), gaps.end());
  const ConvolutionCdf F(cfg.gamma, cfg.rho_s * cfg.zeta, 20.0, 40000);
  const double n = static_cast<double>(gaps.size());
  double d = 0.0;
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    const double f = F(gaps[i]);
    d = std::max({d, std::fabs((i + 1) / n - f), std::fabs(i / n - f)});
  }
  EXPECT_LT(d, 0.02);
}

TEST(Simulate, RunawayCap) {
  SimConfig c = default_config(100000);
  c.max_events = 1000;
  EXPECT_THROW(simulate(c), RunawayError);
}

TEST(Simulate, ConfigValidation) {
  SimConfig c = default_config(10);
  c.zeta = 0.0;
  EXPECT_THROW(simulate(c), DomainError);
  c = default_config(10);
  c.rho_s = -1.0;
  EXPECT_THROW(simulate(c), DomainError);
  c = default_config(10);
  c.stop = StopRule::horizon(0.0);
  EXPECT_THROW(simulate(c), DomainError);
}

TEST(Metrics, HandComputedPath) {
  const std::vector<double> grid{0.0, 1.5, 2.2, 10.0};
  const EmpiricalMetrics m = empirical_metrics(hand_path(), grid);
  EXPECT_EQ(m.n_effective, 3u);
  EXPECT_EQ(m.n_intervals, 2u);
  EXPECT_EQ(m.invalid_count, 1u);
  EXPECT_DOUBLE_EQ(m.avg_aoi, 1.5);
  EXPECT_DOUBLE_EQ(m.mean_cycle, 1.5);
  EXPECT_DOUBLE_EQ(m.mean_peak, 2.25);
  EXPECT_DOUBLE_EQ(m.p_v[0], 1.0);
  EXPECT_DOUBLE_EQ(m.p_v[1], 0.5);
  EXPECT_NEAR(m.p_v[2], 0.1, 1e-15);
  EXPECT_DOUBLE_EQ(m.p_v[3], 0.0);
  EXPECT_DOUBLE_EQ(m.p_pv[0], 1.0);
  EXPECT_DOUBLE_EQ(m.p_pv[1], 1.0);
  EXPECT_DOUBLE_EQ(m.p_pv[2], 0.5);
  EXPECT_DOUBLE_EQ(m.p_pv[3], 0.0);
}

TEST(Metrics, TooFewUpdates) {
  SamplePath p;
  p.updates = {{0.0, 0.1, 1.0}};
  const std::vector<double> grid{1.0};
  EXPECT_THROW(empirical_metrics(p, grid), InsufficientDataError);
}

TEST(Metrics, StreamingMatchesStoredPath) {
  const SimConfig cfg = default_config(5000, 3);
  const std::vector<double> grid{1, 3, 5};
  const EmpiricalMetrics a = simulate_metrics(cfg, grid);
  const EmpiricalMetrics b = empirical_metrics(simulate(cfg), grid);
  EXPECT_DOUBLE_EQ(a.avg_aoi, b.avg_aoi);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_DOUBLE_EQ(a.p_v[i], b.p_v[i]);
    EXPECT_DOUBLE_EQ(a.p_pv[i], b.p_pv[i]);
  }
}

TEST(Metrics, ProbabilitiesOrderedAndBounded) {
  const std::vector<double> grid{0, 0.5, 1, 2, 3, 4, 5, 6, 8, 12, 50};
  const EmpiricalMetrics m = simulate_metrics(default_config(20000, 4), grid);
  EXPECT_EQ(m.p_v.front(), 1.0);
  EXPECT_EQ(m.p_v.back(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_GE(m.p_v[i], 0.0);
    EXPECT_LE(m.p_pv[i], 1.0);
    if (i > 0) {
      EXPECT_LE(m.p_v[i], m.p_v[i - 1]);
      EXPECT_LE(m.p_pv[i], m.p_pv[i - 1]);
    }
  }
  EXPECT_EQ(m.n_batches, kTargetBatches);
}

TEST(Metrics, MergeIsOrderIndependent) {
  const std::vector<double> grid{2, 4};
  auto run = [&](std::uint64_t seed) {
    MetricAccumulator acc(grid, 100);
    simulate_stream(default_config(1050, seed), [&](const Update& u) { acc.add(u); });
    return acc;
  };
  MetricAccumulator ab = run(1);
  ab.merge(run(2));
  MetricAccumulator ba = run(2);
  ba.merge(run(1));
  const EmpiricalMetrics x = ab.finish();
  const EmpiricalMetrics y = ba.finish();
  EXPECT_NEAR(x.avg_aoi, y.avg_aoi, 1e-12);
  EXPECT_NEAR(x.p_v[0], y.p_v[0], 1e-12);
  EXPECT_NEAR(x.p_pv[1], y.p_pv[1], 1e-12);
  EXPECT_NEAR(x.avg_aoi_se, y.avg_aoi_se, 1e-12);
  EXPECT_EQ(x.n_effective, 2100u);
}

TEST(Metrics, RenewalAndPeakIdentities) {
  const SimConfig cfg = default_config(200000, 8);
  const SamplePath p = simulate(cfg);
  const std::vector<double> grid{1};
  const EmpiricalMetrics m = empirical_metrics(p, grid);
  const double rho = cfg.rho_s * cfg.zeta;
  const double mean_x = cfg.gamma.mean();
  EXPECT_NEAR(m.mean_cycle, 1 / rho + mean_x, 0.01 * (1 / rho + mean_x));

  double gen_gap = 0.0, latency = 0.0;
  for (std::size_t k = 1; k < p.updates.size(); ++k) {
    gen_gap += p.updates[k].G - p.updates[k - 1].G;
    latency += p.updates[k].U - p.updates[k].A;
  }
  const double n = static_cast<double>(p.updates.size() - 1);
  EXPECT_NEAR(m.mean_peak, gen_gap / n + latency / n + cfg.t_tx, 0.01 * m.mean_peak);
}

TEST(Metrics, StopRulesAgreeAtMatchedScale) {
  const std::vector<double> grid{2, 4, 6};
  SimConfig by_updates = default_config(100000, 12);
  SimConfig by_horizon = default_config(1, 13);
  by_horizon.stop = StopRule::horizon(100000 / by_horizon.update_rate());
  const EmpiricalMetrics a = simulate_metrics(by_updates, grid);
  const EmpiricalMetrics b = simulate_metrics(by_horizon, grid);
  EXPECT_NEAR(static_cast<double>(b.n_effective), 1e5, 2e3);
  auto within = [](double x, double y, double sx, double sy) {
    return std::fabs(x - y) < 2.0 * std::hypot(sx, sy);
  };
  EXPECT_TRUE(within(a.avg_aoi, b.avg_aoi, a.avg_aoi_se, b.avg_aoi_se));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_TRUE(within(a.p_v[i], b.p_v[i], a.p_v_se[i], b.p_v_se[i])) << grid[i];
    EXPECT_TRUE(within(a.p_pv[i], b.p_pv[i], a.p_pv_se[i], b.p_pv_se[i])) << grid[i];
  }
}

TEST(PathCsv, Format) {
  std::ostringstream out;
  write_path_csv(out, hand_path());
  EXPECT_EQ(out.str(),
            "k,G,A,U\n"
            "1,0.000000000,0.100000000,1.000000000\n"
            "2,1.500000000,1.600000000,2.000000000\n"
            "3,2.500000000,2.600000000,4.000000000\n");
}
