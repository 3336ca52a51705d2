#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "ledgerage/latency.hpp"

namespace ledgerage::sim {

using latency::GammaParams;

struct StopRule {
  enum class Kind { Horizon, Updates };
  Kind kind = Kind::Updates;
  double value = 2e5;  // seconds of generation time, or effective updates

  static StopRule horizon(double seconds) { return {Kind::Horizon, seconds}; }
  static StopRule updates(std::uint64_t n) { return {Kind::Updates, static_cast<double>(n)}; }
};

struct SimConfig {
  double rho_s = 15.0;  // packet generation rate, 1/s
  double zeta = 0.6;    // transmit success probability
  double t_tx = 0.0;
  GammaParams gamma{5.42, 2.84};
  StopRule stop;
  std::uint64_t seed = 1;
  std::uint64_t max_events = 1'000'000'000;  // generated packets before giving up

  void validate() const;
  // Rate of effective updates, 1 / (1/(rho_s zeta) + alpha/beta).
  double update_rate() const;
};

// Stream identifiers for derive_seed().
enum class Stream : std::uint64_t { Generation = 1, Thinning = 2, Consensus = 3 };

struct Update {
  double G;  // generation instant
  double A;  // arrival at the blockchain
  double U;  // commit instant
};

struct RunCounts {
  std::uint64_t generated = 0;
  std::uint64_t arrivals = 0;  // packets surviving the uplink
  std::uint64_t effective = 0;
  std::uint64_t invalid = 0;
  double total_time = 0.0;  // last commit instant
};

struct SamplePath {
  std::vector<Update> updates;
  std::uint64_t invalid_count = 0;
  std::uint64_t arrivals = 0;
  double total_time = 0.0;
};

// Runs the update process, handing every effective update to on_update in order.
RunCounts simulate_stream(const SimConfig& config, const std::function<void(const Update&)>& on_update);

SamplePath simulate(const SimConfig& config);

// CSV with header k,G,A,U, 9 decimals.
void write_path_csv(std::ostream& out, const SamplePath& path);

// Per-batch sums. Merging is plain addition, so any grouping gives the same totals.
struct MetricTotals {
  double area = 0.0;
  double time = 0.0;
  double peak_sum = 0.0;
  std::uint64_t intervals = 0;
  std::vector<double> time_above;
  std::vector<std::uint64_t> peaks_above;

  explicit MetricTotals(std::size_t n_v = 0) : time_above(n_v, 0.0), peaks_above(n_v, 0) {}
  void merge(const MetricTotals& other);
};

struct EmpiricalMetrics {
  std::vector<double> v_grid;
  double avg_aoi = 0.0;
  double avg_aoi_se = 0.0;
  std::vector<double> p_v;
  std::vector<double> p_v_se;
  std::vector<double> p_pv;
  std::vector<double> p_pv_se;
  double mean_cycle = 0.0;  // mean of U_k - U_{k-1}
  double mean_peak = 0.0;
  std::uint64_t n_effective = 0;
  std::uint64_t n_intervals = 0;
  std::uint64_t invalid_count = 0;
  std::size_t n_batches = 0;
};

// Streams updates into batch totals. The first update only anchors the
// sawtooth; intervals [U_{k-1}, U_k) for k >= 2 are measured.
class MetricAccumulator {
 public:
  MetricAccumulator(std::vector<double> v_grid, std::uint64_t batch_size);

  void add(const Update& u);
  // Appends another run's batches. Order does not affect the result.
  void merge(const MetricAccumulator& other);
  void set_invalid_count(std::uint64_t n) { invalid_ = n; }

  EmpiricalMetrics finish() const;

 private:
  void close_batch();

  std::vector<double> v_grid_;
  std::uint64_t batch_size_;
  std::vector<MetricTotals> batches_;
  MetricTotals current_;
  bool has_prev_ = false;
  Update prev_{};
  std::uint64_t n_effective_ = 0;
  std::uint64_t invalid_ = 0;
};

inline constexpr std::size_t kTargetBatches = 32;

EmpiricalMetrics empirical_metrics(const SamplePath& path, std::span<const double> v_grid);

// Simulate and measure without keeping the path in memory.
EmpiricalMetrics simulate_metrics(const SimConfig& config, std::span<const double> v_grid);

}  // namespace ledgerage::sim
