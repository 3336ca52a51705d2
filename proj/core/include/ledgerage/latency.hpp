#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ledgerage/rng.hpp"

namespace ledgerage::latency {

// Gamma consensus latency, shape alpha and rate beta (1/s).
struct GammaParams {
  double alpha = 1.0;
  double beta = 1.0;

  void validate() const;
  double mean() const { return alpha / beta; }
  double sd() const;
  double skewness() const;
};

double gamma_pdf(const GammaParams& p, double x);
double gamma_cdf(const GammaParams& p, double x);

class LatencyTrace {
 public:
  explicit LatencyTrace(std::vector<double> samples);

  const std::vector<double>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }

 private:
  std::vector<double> samples_;
};

// One latency per line, blank lines ignored.
LatencyTrace read_trace(std::istream& in);
LatencyTrace read_trace_file(const std::string& path);
void write_trace(std::ostream& out, std::span<const double> samples);

// KS critical value for 1000 samples at significance 0.01.
inline constexpr double kKsCritical1000 = 0.0515;

GammaParams fit_gamma(const LatencyTrace& trace);
double ks_statistic(const LatencyTrace& trace, const GammaParams& params);

double sample_latency(const GammaParams& params, Rng& rng);

enum class Knob { TargetStp, BlockSize, Timeout };

std::string_view knob_name(Knob k);
Knob parse_knob(std::string_view name);

struct HlfParamRow {
  Knob knob;
  double knob_value;
  GammaParams gamma;
  double avg_latency;
  double sd;
  double skewness;
  double ks_statistic;
};

std::span<const HlfParamRow> table_rows(Knob knob);
const HlfParamRow& lookup_params(Knob knob, double value);
// Row whose knob value is closest to the requested one.
const HlfParamRow& nearest_row(Knob knob, double value);

}  // namespace ledgerage::latency
