#include <cmath>
#include <limits>
#include <sstream>

#include "ledgerage/aoi.hpp"
#include "ledgerage/errors.hpp"

namespace ledgerage::aoi::literal {

using numerics::gamma_p;
using numerics::gamma_q;
using numerics::kummer_1f1;
using numerics::ln_beta;
using numerics::ln_gamma;
using numerics::SeriesSum;

namespace {

// sign * exp(log_mag)
double signed_exp(int sign, double log_mag) { return sign * std::exp(log_mag); }

// Tracks the largest term seen so the rounding error of an alternating sum
// can be compared against its value.
struct Magnitude {
  double max_abs = 0.0;
  void see(double t) { max_abs = std::max(max_abs, std::fabs(t)); }
  double rounding() const { return max_abs * std::numeric_limits<double>::epsilon() * 16; }
};

void check_loss(const Magnitude& mag, const char* what) {
  if (mag.rounding() > 1e-8) {
    std::ostringstream os;
    os << what << ": alternating terms up to " << mag.max_abs
       << " exhaust double precision; use the production evaluator";
    throw NumericError(os.str(), mag.rounding());
  }
}

void check_exhausted(const SeriesSum& s, int limit, const char* what) {
  if (s.terms() >= limit) {
    std::ostringstream os;
    os << what << " did not converge within " << limit << " terms";
    throw ConvergenceError(os.str(), std::fabs(s.last_term()));
  }
}

}  // namespace

double violation(const AoiModel& model, TargetAoi v, const SeriesControl& ctl) {
  model.validate();
  ctl.validate();
  const double T = v.slack(model);
  if (T == 0.0) return 1.0;
  const double a = model.gamma.alpha;
  const double b = model.gamma.beta;
  const double r = model.rho;
  const double x = b * T;
  const double lg_a = ln_gamma(a);
  const double lower_a = numerics::lower_inc_gamma(a, x);
  Magnitude mag;

  // First double series over n and k.
  SeriesSum s1(ctl);
  const int sign_d = r >= b ? 1 : -1;
  const double log_d = r != b ? std::log(std::fabs(r - b)) : 0.0;
  for (int n = 0; n < ctl.max_terms; ++n) {
    if (r == b && n > 0) break;
    SeriesSum inner(ctl);
    for (int k = 0; k < ctl.max_terms; ++k) {
      const double lt = (a + n + k + 1.0) * std::log(r * T) - ln_gamma(k + 1.0) -
                        std::log(a + n + k + 1.0) + ln_beta(a + n + k + 2.0, a) + a * std::log(T);
      const double t = signed_exp(k % 2 == 0 ? 1 : -1, lt) *
                       kummer_1f1(a, 2.0 * a + n + k + 2.0, -x, ctl);
      mag.see(t);
      if (inner.add(t)) break;
    }
    check_exhausted(inner, ctl.max_terms, "literal violation: k-series");
    const double lead = std::exp(ln_gamma(a + n + 1.0) - a * std::log(b)) * lower_a;
    const double lc = n * log_d - ln_gamma(n + 1.0) - std::log(a + n) - (a + n + 1.0) * std::log(r);
    const int sc = (n % 2 == 1 && sign_d < 0) ? -1 : 1;
    const double t = signed_exp(sc, lc) * (lead - inner.value());
    mag.see(t);
    if (s1.add(t)) break;
  }
  check_exhausted(s1, ctl.max_terms, "literal violation: n-series");
  const double pre1 = std::exp(std::log(r) + (2.0 * a + 1.0) * std::log(b) -
                               std::log(b + r * a) - 2.0 * lg_a);

  // Remaining single series in n.
  SeriesSum s2a(ctl);
  SeriesSum s2b(ctl);
  for (int n = 0; n < ctl.max_terms; ++n) {
    const double lx = (2.0 * a + n + 1.0) * std::log(x) - ln_gamma(n + 1.0) - lg_a;
    const double m = kummer_1f1(a, 2.0 * a + n + 2.0, -x, ctl);
    const int sg = n % 2 == 0 ? 1 : -1;
    const double ta = signed_exp(sg, lx - std::log(a + n + 1.0) + ln_beta(a + n + 2.0, a)) * m;
    const double tb = signed_exp(sg, lx - std::log(a + n) + ln_beta(a, a + n + 2.0)) * m;
    mag.see(ta);
    mag.see(tb);
    const bool da = s2a.add(ta);
    const bool db = s2b.add(tb);
    if (da && db) break;
  }
  check_exhausted(s2a, ctl.max_terms, "literal violation: second n-series");
  const double s2 = a * lower_a - s2a.value() -
                    std::pow(x, a + 1.0) * numerics::beta_fn(a, 2.0) *
                        kummer_1f1(a, a + 2.0, -x, ctl) +
                    s2b.value();
  const double pre2 = r / ((b + r * a) * std::exp(lg_a));

  check_loss(mag, "literal violation");
  return pre1 * s1.value() + pre2 * s2 + gamma_q(a, x);
}

double peak_violation(const AoiModel& model, TargetAoi v, const SeriesControl& ctl) {
  model.validate();
  ctl.validate();
  const double T = v.slack(model);
  if (T == 0.0) return 1.0;
  const double a = model.gamma.alpha;
  const double b = model.gamma.beta;
  const double r = model.rho;
  const double lg_a = ln_gamma(a);
  const double log_b = std::log(b);
  const double log_d = r != b ? std::log(std::fabs(r - b)) : 0.0;
  Magnitude mag;

  SeriesSum outer(ctl);
  for (int n = 0; n < ctl.max_terms; ++n) {
    SeriesSum inner(ctl);
    for (int k = 0; k < ctl.max_terms; ++k) {
      const int j = n + k;
      const double common = 2.0 * a * log_b - 2.0 * lg_a + (2.0 * a + j) * std::log(T) -
                            ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - std::log(a + n) +
                            ln_beta(a + n + 1.0, a + k);
      const double t_beta = signed_exp(j % 2 == 0 ? 1 : -1, common + j * log_b);
      double t_rho = 0.0;
      if (r != b || j == 0) {
        const int sd = (r < b && j % 2 == 1) ? -1 : 1;
        t_rho = signed_exp(sd, common - r * T + j * log_d);
      }
      mag.see(t_beta);
      mag.see(t_rho);
      if (inner.add(t_beta - t_rho)) break;
    }
    check_exhausted(inner, ctl.max_terms, "literal peak_violation: k-series");
    if (outer.add(inner.value())) break;
  }
  check_exhausted(outer, ctl.max_terms, "literal peak_violation: n-series");
  check_loss(mag, "literal peak_violation");
  return 1.0 - outer.value();
}

}  // namespace ledgerage::aoi::literal
