#include "ledgerage/numerics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "ledgerage/errors.hpp"

namespace ledgerage::numerics {

namespace {

constexpr int kMaxIncGammaIter = 100000;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

void require_positive(double v, const char* name, const char* fn) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << fn << ": " << name << " must be a positive finite number, got " << v;
    throw DomainError(os.str());
  }
}

void require_nonnegative(double v, const char* name, const char* fn) {
  if (!(v >= 0.0)) {
    std::ostringstream os;
    os << fn << ": " << name << " must be non-negative, got " << v;
    throw DomainError(os.str());
  }
}

// log of x^a e^{-x} / Gamma(a)
double log_prefix(double a, double x) { return a * std::log(x) - x - ln_gamma(a); }

double p_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int n = 0; n < kMaxIncGammaIter; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kEps * 0.5) {
      return std::exp(std::log(sum) + log_prefix(a, x));
    }
  }
  throw ConvergenceError("incomplete gamma series did not converge", del);
}

double q_continued_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIncGammaIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) {
      return std::exp(std::log(h) + log_prefix(a, x));
    }
  }
  throw ConvergenceError("incomplete gamma continued fraction did not converge", h);
}

bool is_nonpositive_integer(double b) { return b <= 0.0 && std::floor(b) == b; }

}  // namespace

void SeriesControl::validate() const {
  if (!(rel_tolerance > 0.0)) throw DomainError("SeriesControl: rel_tolerance must be > 0");
  if (max_terms < 1) throw DomainError("SeriesControl: max_terms must be >= 1");
}

SeriesSum::SeriesSum(const SeriesControl& ctl, int min_terms)
    : tol_(ctl.rel_tolerance), max_terms_(ctl.max_terms), min_terms_(min_terms) {}

bool SeriesSum::add(double term) {
  const double t = sum_ + term;
  if (std::fabs(sum_) >= std::fabs(term)) {
    comp_ += (sum_ - t) + term;
  } else {
    comp_ += (term - t) + sum_;
  }
  sum_ = t;
  last_ = term;
  ++terms_;
  if (std::fabs(term) <= tol_ * std::fabs(value())) {
    ++small_run_;
  } else {
    small_run_ = 0;
  }
  return terms_ >= min_terms_ && small_run_ >= 3;
}

double ln_gamma(double x) {
  require_positive(x, "x", "ln_gamma");
  return boost::math::lgamma(x);
}

double gamma_p(double a, double x) {
  require_positive(a, "a", "gamma_p");
  require_nonnegative(x, "x", "gamma_p");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return p_series(a, x);
  return 1.0 - q_continued_fraction(a, x);
}

double gamma_q(double a, double x) {
  require_positive(a, "a", "gamma_q");
  require_nonnegative(x, "x", "gamma_q");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - p_series(a, x);
  return q_continued_fraction(a, x);
}

double lower_inc_gamma(double a, double x) {
  const double p = gamma_p(a, x);
  if (p == 0.0) return 0.0;
  return std::exp(std::log(p) + ln_gamma(a));
}

double upper_inc_gamma(double a, double x) {
  const double q = gamma_q(a, x);
  if (q == 0.0) return 0.0;
  return std::exp(std::log(q) + ln_gamma(a));
}

double ln_beta(double a, double b) {
  require_positive(a, "a", "beta_fn");
  require_positive(b, "b", "beta_fn");
  return ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
}

double beta_fn(double a, double b) { return std::exp(ln_beta(a, b)); }

namespace detail {

double kummer_1f1_series(double a, double b, double z, const SeriesControl& ctl) {
  ctl.validate();
  if (is_nonpositive_integer(b)) {
    throw DomainError("kummer_1f1: b must not be a non-positive integer");
  }
  SeriesSum sum(ctl);
  double term = 1.0;
  bool done = sum.add(term);
  for (int j = 0; !done && j + 1 < ctl.max_terms; ++j) {
    term *= (a + j) / (b + j) * z / (j + 1.0);
    done = sum.add(term) || term == 0.0;  // zero term: a is a non-positive integer
  }
  if (!done) {
    std::ostringstream os;
    os << "kummer_1f1(" << a << ", " << b << ", " << z << ") did not converge within "
       << ctl.max_terms << " terms";
    throw ConvergenceError(os.str(), std::fabs(term));
  }
  const double v = sum.value();
  if (!std::isfinite(v)) {
    throw NumericError("kummer_1f1: overflow in power series", std::fabs(term));
  }
  return v;
}

}  // namespace detail

double log_kummer_1f1(double a, double b, double z, const SeriesControl& ctl) {
  ctl.validate();
  if (!(a >= 0.0) || !(b > 0.0) || !(z >= 0.0) || !std::isfinite(z)) {
    throw DomainError("log_kummer_1f1: requires a >= 0, b > 0, finite z >= 0");
  }
  if (a == 0.0 || z == 0.0) return 0.0;
  constexpr double kRescale = 1e250;
  const double log_rescale = std::log(kRescale);
  double term = 1.0;
  double sum = 1.0;
  double log_scale = 0.0;
  int small_run = 0;
  for (int j = 0; j + 1 < ctl.max_terms; ++j) {
    term *= (a + j) / (b + j) * z / (j + 1.0);
    sum += term;
    if (sum > kRescale) {
      sum /= kRescale;
      term /= kRescale;
      log_scale += log_rescale;
    }
    small_run = term <= ctl.rel_tolerance * sum ? small_run + 1 : 0;
    if (small_run >= 3) return std::log(sum) + log_scale;
  }
  std::ostringstream os;
  os << "log_kummer_1f1(" << a << ", " << b << ", " << z << ") did not converge within "
     << ctl.max_terms << " terms";
  throw ConvergenceError(os.str(), term);
}

double kummer_1f1(double a, double b, double z, const SeriesControl& ctl) {
  ctl.validate();
  if (is_nonpositive_integer(b)) {
    throw DomainError("kummer_1f1: b must not be a non-positive integer");
  }
  if (std::isnan(a) || std::isnan(b) || std::isnan(z)) {
    throw DomainError("kummer_1f1: NaN argument");
  }
  if (z == 0.0) return 1.0;
  if (z < 0.0) {
    if (b - a >= 0.0 && b > 0.0) return std::exp(z + log_kummer_1f1(b - a, b, -z, ctl));
    return std::exp(z) * detail::kummer_1f1_series(b - a, b, -z, ctl);
  }
  if (a >= 0.0 && b > 0.0) {
    const double v = std::exp(log_kummer_1f1(a, b, z, ctl));
    if (!std::isfinite(v)) throw NumericError("kummer_1f1: result overflows double", v);
    return v;
  }
  return detail::kummer_1f1_series(a, b, z, ctl);
}

}  // namespace ledgerage::numerics
