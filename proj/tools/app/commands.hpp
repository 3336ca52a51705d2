#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "csv.hpp"
#include "ledgerage/aoi.hpp"

namespace ledgerage::cli {

// Effective updates below which simulate output is flagged low_sample.
inline constexpr std::uint64_t kLowSampleUpdates = 10000;
inline constexpr std::uint64_t kDefaultStopUpdates = 200000;

// Model quantities derived from a config.
struct Resolved {
  latency::GammaParams gamma;
  double rate = 0.0;  // bit/s
  double t_tx = 0.0;
  double rho = 0.0;
  std::string gamma_origin;

  aoi::AoiModel model() const { return {gamma, rho, t_tx}; }
};

Resolved resolve(const ExperimentConfig& config);

CsvTable run_analyze(const ExperimentConfig& config);
CsvTable run_simulate(const ExperimentConfig& config);
CsvTable run_compare(const ExperimentConfig& config);

struct FitOutcome {
  CsvTable table;
  latency::GammaParams params;
  bool ks_pass = false;
};

FitOutcome run_fit(const std::string& trace_path, std::uint64_t n_samples_critical = 1000);
// Config snippet selecting the fitted parameters.
std::string gamma_snippet(const latency::GammaParams& params);

struct SweepOptions {
  latency::Knob knob = latency::Knob::TargetStp;
  double fixed_v = 5.5;
  std::optional<std::vector<double>> values;
  bool simulate = false;
};

CsvTable run_sweep(const ExperimentConfig& config, const SweepOptions& options);

// Seed for one sweep point, independent of evaluation order.
std::uint64_t point_seed(std::uint64_t master, double knob_value);

std::vector<double> generate_trace(const latency::GammaParams& params, std::size_t n,
                                   std::uint64_t seed);

}  // namespace ledgerage::cli
