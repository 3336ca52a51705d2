#include <algorithm>
#include <cmath>
#include <limits>

#include "ledgerage/errors.hpp"
#include "ledgerage/sim.hpp"

namespace ledgerage::sim {

namespace {

// Standard error of the mean of per-batch ratios.
double batch_se(const std::vector<MetricTotals>& batches, auto ratio) {
  const std::size_t n = batches.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  double mean = 0.0;
  for (const auto& b : batches) mean += ratio(b);
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (const auto& b : batches) {
    const double d = ratio(b) - mean;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

std::uint64_t batch_size_for(std::uint64_t expected_intervals) {
  return std::max<std::uint64_t>(1, (expected_intervals + kTargetBatches - 1) / kTargetBatches);
}

}  // namespace

void MetricTotals::merge(const MetricTotals& other) {
  area += other.area;
  time += other.time;
  peak_sum += other.peak_sum;
  intervals += other.intervals;
  if (time_above.size() < other.time_above.size()) {
    time_above.resize(other.time_above.size(), 0.0);
    peaks_above.resize(other.peaks_above.size(), 0);
  }
  for (std::size_t i = 0; i < other.time_above.size(); ++i) {
    time_above[i] += other.time_above[i];
    peaks_above[i] += other.peaks_above[i];
  }
}

MetricAccumulator::MetricAccumulator(std::vector<double> v_grid, std::uint64_t batch_size)
    : v_grid_(std::move(v_grid)), batch_size_(std::max<std::uint64_t>(1, batch_size)),
      current_(v_grid_.size()) {}

void MetricAccumulator::add(const Update& u) {
  ++n_effective_;
  if (has_prev_) {
    const double start = prev_.U - prev_.G;
    const double peak = u.U - prev_.G;
    const double len = u.U - prev_.U;
    current_.area += 0.5 * (peak * peak - start * start);
    current_.time += len;
    current_.peak_sum += peak;
    ++current_.intervals;
    for (std::size_t i = 0; i < v_grid_.size(); ++i) {
      const double v = v_grid_[i];
      current_.time_above[i] += std::min(std::max(peak - v, 0.0), len);
      if (peak >= v) ++current_.peaks_above[i];
    }
    if (current_.intervals >= batch_size_) close_batch();
  }
  prev_ = u;
  has_prev_ = true;
}

void MetricAccumulator::close_batch() {
  batches_.push_back(std::move(current_));
  current_ = MetricTotals(v_grid_.size());
}

void MetricAccumulator::merge(const MetricAccumulator& other) {
  if (other.v_grid_ != v_grid_) throw DomainError("cannot merge metrics over different v grids");
  batches_.insert(batches_.end(), other.batches_.begin(), other.batches_.end());
  if (other.current_.intervals > 0) batches_.push_back(other.current_);
  n_effective_ += other.n_effective_;
  invalid_ += other.invalid_;
}

EmpiricalMetrics MetricAccumulator::finish() const {
  std::vector<MetricTotals> batches = batches_;
  if (current_.intervals > 0) {
    // A short trailing batch is folded into its predecessor.
    if (!batches.empty() && current_.intervals * 2 < batch_size_) {
      batches.back().merge(current_);
    } else {
      batches.push_back(current_);
    }
  }
  MetricTotals total(v_grid_.size());
  for (const auto& b : batches) total.merge(b);
  if (total.intervals == 0) {
    throw InsufficientDataError("need at least 2 effective updates to measure AoI");
  }

  EmpiricalMetrics m;
  m.v_grid = v_grid_;
  m.n_effective = n_effective_;
  m.n_intervals = total.intervals;
  m.invalid_count = invalid_;
  m.n_batches = batches.size();
  m.avg_aoi = total.area / total.time;
  m.avg_aoi_se = batch_se(batches, [](const MetricTotals& b) { return b.area / b.time; });
  m.mean_cycle = total.time / static_cast<double>(total.intervals);
  m.mean_peak = total.peak_sum / static_cast<double>(total.intervals);
  for (std::size_t i = 0; i < v_grid_.size(); ++i) {
    m.p_v.push_back(total.time_above[i] / total.time);
    m.p_pv.push_back(static_cast<double>(total.peaks_above[i]) /
                     static_cast<double>(total.intervals));
    m.p_v_se.push_back(
        batch_se(batches, [i](const MetricTotals& b) { return b.time_above[i] / b.time; }));
    m.p_pv_se.push_back(batch_se(batches, [i](const MetricTotals& b) {
      return static_cast<double>(b.peaks_above[i]) / static_cast<double>(b.intervals);
    }));
  }
  return m;
}

EmpiricalMetrics empirical_metrics(const SamplePath& path, std::span<const double> v_grid) {
  if (path.updates.size() < 2) {
    throw InsufficientDataError("need at least 2 effective updates to measure AoI");
  }
  MetricAccumulator acc(std::vector<double>(v_grid.begin(), v_grid.end()),
                        batch_size_for(path.updates.size() - 1));
  for (const auto& u : path.updates) acc.add(u);
  acc.set_invalid_count(path.invalid_count);
  return acc.finish();
}

EmpiricalMetrics simulate_metrics(const SimConfig& config, std::span<const double> v_grid) {
  config.validate();
  const double expected = config.stop.kind == StopRule::Kind::Updates
                              ? config.stop.value
                              : config.stop.value * config.update_rate();
  MetricAccumulator acc(std::vector<double>(v_grid.begin(), v_grid.end()),
                        batch_size_for(static_cast<std::uint64_t>(std::max(1.0, expected - 1.0))));
  const RunCounts c = simulate_stream(config, [&](const Update& u) { acc.add(u); });
  acc.set_invalid_count(c.invalid);
  return acc.finish();
}

}  // namespace ledgerage::sim
