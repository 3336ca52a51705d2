#include "ledgerage/aoi.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "ledgerage/errors.hpp"

namespace ledgerage::aoi {

using numerics::gamma_p;
using numerics::gamma_q;
using numerics::ln_gamma;
using numerics::SeriesSum;

namespace {

constexpr double kClampSlack = 1e-9;

[[noreturn]] void throw_exhausted(const char* what, const SeriesSum& sum) {
  std::ostringstream os;
  os << what << " did not converge within " << sum.terms() << " terms";
  throw ConvergenceError(os.str(), std::fabs(sum.last_term()));
}

// Convolution term of X_{k-1} with the Exp(rho) tail, rho < beta.
double convolution_term_slow_arrivals(double a, double b, double r, double T,
                                      const SeriesControl& ctl) {
  const double x = b * T;
  const double q = 1.0 - r / b;
  SeriesSum sum(ctl);
  double qm = 1.0;
  for (int m = 0;; ++m) {
    if (m >= ctl.max_terms) throw_exhausted("aoi_violation: geometric series", sum);
    if (sum.add(qm * gamma_p(2.0 * a + m + 1.0, x))) break;
    qm *= q;
  }
  return gamma_p(a, x) / r - sum.value() / b;
}

// Same term for rho >= beta: positive double series in (n, k). The inner
// k-sums depend on n + k only through the summand, so they are formed once
// as tail sums of a single sequence.
double convolution_term_fast_arrivals(double a, double b, double r, double T,
                                      const SeriesControl& ctl) {
  const double x = b * T;
  const double rT = r * T;
  const double delta = r - b;
  const double z = delta * T;
  const double Pa = gamma_p(a, x);

  const double log_base = a * std::log(x) - rT;
  const double log_rT = std::log(rT);
  std::vector<double> terms;
  SeriesSum inner(ctl, static_cast<int>(std::ceil(rT)) + 1);
  for (int j = 0;; ++j) {
    if (j >= ctl.max_terms) throw_exhausted("aoi_violation: inner k-series", inner);
    const double c = 2.0 * a + j + 2.0;
    const double lt = log_base + (a + 1.0 + j) * log_rT - ln_gamma(c) +
                      numerics::log_kummer_1f1(a, c, z, ctl);
    const double t = std::exp(lt);
    terms.push_back(t);
    if (inner.add(t)) break;
  }
  std::vector<double> tail(terms.size() + 1, 0.0);
  for (std::size_t j = terms.size(); j-- > 0;) tail[j] = tail[j + 1] + terms[j];

  const double log_delta = delta > 0.0 ? std::log(delta) : 0.0;
  const double log_r = std::log(r);
  const double lg_a = ln_gamma(a);
  SeriesSum outer(ctl);
  for (int n = 0;; ++n) {
    if (n >= ctl.max_terms) throw_exhausted("aoi_violation: outer n-series", outer);
    if (delta == 0.0 && n > 0) break;
    const double lc = a * std::log(b) + n * log_delta + ln_gamma(a + n + 1.0) - lg_a -
                      ln_gamma(n + 1.0) - std::log(a + n) - (a + n + 1.0) * log_r;
    const double rn = static_cast<std::size_t>(n) < tail.size() ? tail[n] : 0.0;
    if (outer.add(std::exp(lc) * (Pa - rn))) break;
  }
  return outer.value();
}

Evaluation clamp_result(double raw, Method method) {
  Evaluation e;
  e.raw = raw;
  e.method = method;
  e.value = std::clamp(raw, 0.0, 1.0);
  e.clamped = e.value != raw;
  return e;
}

}  // namespace

void AoiModel::validate() const {
  gamma.validate();
  if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("arrival rate rho must be positive");
  if (!(t_tx >= 0.0) || !std::isfinite(t_tx)) {
    throw DomainError("transmission latency t_tx must be finite and non-negative");
  }
}

double AoiModel::mean_cycle() const { return 1.0 / rho + gamma.alpha / gamma.beta; }

double TargetAoi::slack(const AoiModel& model) const {
  if (!(v >= 0.0)) throw DomainError("target AoI v must be non-negative");
  return std::max(0.0, v - model.t_tx);
}

std::string method_name(Method m) { return m == Method::Series ? "series" : "quadrature"; }

double average_aoi(const AoiModel& model) {
  model.validate();
  const double a = model.gamma.alpha;
  const double b = model.gamma.beta;
  const double r = model.rho;
  return r * b / (2.0 * (a * r + b)) *
             (2.0 / (r * r) + 2.0 * a / (r * b) + (a * a + a) / (b * b)) +
         a / b + model.t_tx;
}

double aoi_violation_series(const AoiModel& model, TargetAoi v, const SeriesControl& ctl) {
  model.validate();
  ctl.validate();
  const double T = v.slack(model);
  if (T == 0.0) return 1.0;
  const double a = model.gamma.alpha;
  const double b = model.gamma.beta;
  const double r = model.rho;
  const double x = b * T;

  const double Pa = gamma_p(a, x);
  const double P2a = gamma_p(2.0 * a, x);
  const double P2a1 = gamma_p(2.0 * a + 1.0, x);
  // E[(X' + X - T)^+ ; X' < T] splits into the Exp(rho) convolution term and
  // two Gamma(2a) convolution terms; X' >= T contributes E[T_k] Q(a, x).
  const double conv = r < b ? convolution_term_slow_arrivals(a, b, r, T, ctl)
                            : convolution_term_fast_arrivals(a, b, r, T, ctl);
  const double mean_x = a / b * (Pa - P2a1);
  const double overshoot = -T * (Pa - P2a) + a / b * (gamma_p(a + 1.0, x) - P2a1);
  return (conv + mean_x + overshoot) / model.mean_cycle() + gamma_q(a, x);
}

Evaluation aoi_violation(const AoiModel& model, TargetAoi v, const SeriesControl& ctl) {
  std::string reason;
  try {
    const double raw = aoi_violation_series(model, v, ctl);
    if (raw >= -kClampSlack && raw <= 1.0 + kClampSlack) return clamp_result(raw, Method::Series);
    std::ostringstream os;
    os << "series value " << raw << " outside [0, 1]";
    reason = os.str();
  } catch (const ConvergenceError& e) {
    reason = e.what();
  } catch (const NumericError& e) {
    reason = e.what();
  }
  const QuadratureResult q = aoi_violation_quadrature(model, v);
  Evaluation e = clamp_result(q.value, Method::Quadrature);
  e.note = "fell back to quadrature: " + reason;
  return e;
}

Evaluation paoi_violation(const AoiModel& model, TargetAoi v, const SeriesControl& ctl) {
  model.validate();
  ctl.validate();
  const double T = v.slack(model);
  if (T == 0.0) return clamp_result(1.0, Method::Series);
  const double a = model.gamma.alpha;
  const double b = model.gamma.beta;
  const double r = model.rho;
  const double x = b * T;

  // P[X + X' + T_int >= T] = P[X + X' >= T] + P[X + X' < T <= X + X' + T_int];
  // X + X' ~ Gamma(2a, b), and the second term is I below.
  double I = 0.0;
  try {
    if (r < b) {
      const double log_z = std::log((b - r) * T);
      const double log_base = 2.0 * a * std::log(x) - x;
      SeriesSum sum(ctl);
      for (int m = 0;; ++m) {
        if (m >= ctl.max_terms) throw_exhausted("paoi_violation: series", sum);
        if (sum.add(std::exp(log_base + m * log_z - ln_gamma(2.0 * a + m + 1.0)))) break;
      }
      I = sum.value();
    } else {
      const double delta = r - b;
      const double log_dT = delta > 0.0 ? std::log(delta * T) : 0.0;
      const double log_pre = 2.0 * a * std::log(x) - 2.0 * ln_gamma(a) - r * T;
      SeriesSum outer(ctl);
      for (int n = 0;; ++n) {
        if (n >= ctl.max_terms) throw_exhausted("paoi_violation: outer n-series", outer);
        if (delta == 0.0 && n > 0) break;
        SeriesSum inner(ctl);
        for (int k = 0;; ++k) {
          if (k >= ctl.max_terms) throw_exhausted("paoi_violation: inner k-series", inner);
          if (delta == 0.0 && k > 0) break;
          const double lt = log_pre + (n + k) * log_dT - ln_gamma(n + 1.0) - ln_gamma(k + 1.0) -
                            std::log(a + n) + numerics::ln_beta(a + n + 1.0, a + k);
          if (inner.add(std::exp(lt))) break;
        }
        if (outer.add(inner.value())) break;
      }
      I = outer.value();
    }
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(std::string(e.what()) +
                               "; estimate P[X + X' + Exp(rho) >= v - t_tx] by Monte Carlo instead",
                           e.last_term());
  }
  const double raw = gamma_q(2.0 * a, x) + I;
  Evaluation e = clamp_result(raw, Method::Series);
  if (raw < -kClampSlack || raw > 1.0 + kClampSlack) {
    std::ostringstream os;
    os << "series value " << raw << " clamped into [0, 1]";
    e.note = os.str();
  }
  return e;
}

}  // namespace ledgerage::aoi
