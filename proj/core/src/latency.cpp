#include "ledgerage/latency.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ledgerage/errors.hpp"
#include "ledgerage/numerics.hpp"

namespace ledgerage::latency {

void GammaParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha) || !(beta > 0.0) || !std::isfinite(beta)) {
    std::ostringstream os;
    os << "Gamma parameters must be positive and finite, got (" << alpha << ", " << beta << ")";
    throw DomainError(os.str());
  }
}

double GammaParams::sd() const { return std::sqrt(alpha) / beta; }
double GammaParams::skewness() const { return 2.0 / std::sqrt(alpha); }

double gamma_pdf(const GammaParams& p, double x) {
  if (!(x > 0.0)) return 0.0;
  return std::exp((p.alpha - 1.0) * std::log(x) - p.beta * x + p.alpha * std::log(p.beta) -
                  numerics::ln_gamma(p.alpha));
}

double gamma_cdf(const GammaParams& p, double x) {
  if (!(x > 0.0)) return 0.0;
  return numerics::gamma_p(p.alpha, p.beta * x);
}

LatencyTrace::LatencyTrace(std::vector<double> samples) : samples_(std::move(samples)) {
  if (samples_.size() < 2) throw DomainError("latency trace needs at least 2 samples");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!(samples_[i] > 0.0) || !std::isfinite(samples_[i])) {
      std::ostringstream os;
      os << "latency sample " << i + 1 << " is not a positive finite number: " << samples_[i];
      throw DomainError(os.str());
    }
  }
}

LatencyTrace read_trace(std::istream& in) {
  std::vector<double> samples;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const char* begin = line.data() + first;
    const char* end = line.data() + last + 1;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end) {
      std::ostringstream os;
      os << "trace line " << line_no << ": cannot parse '" << std::string(begin, end) << "'";
      throw DomainError(os.str());
    }
    samples.push_back(v);
  }
  return LatencyTrace(std::move(samples));
}

LatencyTrace read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open trace file '" + path + "'");
  return read_trace(in);
}

void write_trace(std::ostream& out, std::span<const double> samples) {
  char buf[64];
  for (double x : samples) {
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    out.write(buf, ptr - buf);
    out.put('\n');
  }
}

GammaParams fit_gamma(const LatencyTrace& trace) {
  const auto& xs = trace.samples();
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  double sum_log = 0.0;
  for (double x : xs) {
    sum += x;
    sum_log += std::log(x);
  }
  const double mean = sum / n;
  const double A = std::log(mean) - sum_log / n;
  if (!(A > 1e-12)) {
    throw DegenerateTraceError("degenerate trace: samples are (nearly) constant, A = " +
                               std::to_string(A));
  }
  const double alpha = (1.0 + std::sqrt(1.0 + 4.0 * A / 3.0)) / (4.0 * A);
  return GammaParams{alpha, alpha / mean};
}

double ks_statistic(const LatencyTrace& trace, const GammaParams& params) {
  params.validate();
  std::vector<double> xs = trace.samples();
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = gamma_cdf(params, xs[i]);
    d = std::max({d, std::fabs((i + 1) / n - f), std::fabs(i / n - f)});
  }
  return d;
}

double sample_latency(const GammaParams& params, Rng& rng) {
  // Marsaglia and Tsang (2000); shapes below 1 boosted by U^{1/alpha}.
  const bool boost = params.alpha < 1.0;
  const double a = boost ? params.alpha + 1.0 : params.alpha;
  const double d = a - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  double g;
  for (;;) {
    const double x = rng.normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2 || std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
      g = d * v;
      break;
    }
  }
  if (boost) g *= std::pow(rng.uniform(), 1.0 / params.alpha);
  return g / params.beta;
}

}  // namespace ledgerage::latency
