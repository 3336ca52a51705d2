#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "ledgerage/aoi.hpp"
#include "ledgerage/errors.hpp"

namespace ledgerage::aoi {

namespace {

constexpr unsigned kDigits = 300;
using Real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<kDigits>>;

constexpr double kSingularRelGap = 1e-6;

Real ipow(const Real& base, int e) {
  if (e < 0) return 1 / ipow(base, -e);
  Real result = 1;
  Real b = base;
  while (e > 0) {
    if (e & 1) result *= b;
    b *= b;
    e >>= 1;
  }
  return result;
}

}  // namespace

double aoi_violation_integer(const AoiModel& model, TargetAoi v) {
  model.validate();
  const double alpha = model.gamma.alpha;
  if (alpha < 1.0 || std::floor(alpha) != alpha || alpha > 1e4) {
    std::ostringstream os;
    os << "aoi_violation_integer needs a positive integer shape, got " << alpha;
    throw DomainError(os.str());
  }
  const double bd = model.gamma.beta;
  const double rd = model.rho;
  if (std::fabs(bd - rd) / bd <= kSingularRelGap) {
    std::ostringstream os;
    os << "beta = " << bd << " and rho = " << rd
       << " are too close for the integer-shape form; use aoi_violation_quadrature";
    throw SingularityError(os.str());
  }
  const double Td = v.slack(model);
  if (Td == 0.0) return 1.0;

  const int a = static_cast<int>(alpha);
  const Real b = bd;
  const Real r = rd;
  const Real T = Td;
  const Real x = b * T;
  const Real d = b - r;
  const Real y = d * T;
  const Real ar_b = a * r + b;

  // gamma(a, y) / Gamma(a) = 1 - e^{-y} sum_{n<a} y^n/n!, any sign of y.
  Real partial = 0;
  Real yn = 1;
  for (int n = 0; n < a; ++n) {
    partial += yn;
    yn *= y / (n + 1);
  }
  const Real lower_reg = 1 - exp(-y) * partial;
  const Real first = ipow(b, 2 * a + 1) * exp(-r * T) * lower_reg / (ar_b * ipow(d, 2 * a));

  Real q = 0;
  Real xn = 1;
  for (int n = 0; n < a; ++n) {
    q += xn;
    xn *= x / (n + 1);
  }
  const Real exp_mx = exp(-x);
  q *= exp_mx;

  // poisson[k] = x^{a+k} e^{-x} / (a+k)!
  std::vector<Real> poisson(a);
  Real p = exp_mx;
  for (int n = 1; n <= a; ++n) p *= x / n;
  for (int k = 0; k < a; ++k) {
    poisson[k] = p;
    p *= x / (a + k + 1);
  }
  const Real ratio = d / b;
  Real double_sum = 0;
  Real magnitude = abs(first) + q;
  for (int m = 0; m < a; ++m) {
    const Real factor = 1 - ipow(ratio, m - a);
    Real inner = 0;
    for (int k = 0; k <= m; ++k) inner += poisson[k];
    const Real term = inner * factor;
    double_sum += term;
    magnitude += abs(term) * r / ar_b;
  }
  const Real result = first + q + r / ar_b * double_sum;

  // Cancellation check: the working precision must cover the largest term.
  const double lost = static_cast<double>(log10(magnitude));
  if (lost > static_cast<double>(kDigits) - 30) {
    std::ostringstream os;
    os << "integer-shape form loses " << lost << " digits at beta = " << bd << ", rho = " << rd
       << "; use aoi_violation_quadrature";
    throw SingularityError(os.str());
  }
  return static_cast<double>(result);
}

Bounds aoi_violation_bounds(const AoiModel& model, TargetAoi v) {
  model.validate();
  const double lo = std::floor(model.gamma.alpha);
  const double hi = std::ceil(model.gamma.alpha);
  if (lo < 1.0) throw DomainError("aoi_violation_bounds needs floor(alpha) >= 1");

  auto eval = [&](double shape) {
    AoiModel m = model;
    m.gamma.alpha = shape;
    Evaluation e;
    try {
      e.raw = aoi_violation_integer(m, v);
      e.method = Method::Series;
    } catch (const SingularityError& err) {
      e.raw = aoi_violation_quadrature(m, v).value;
      e.method = Method::Quadrature;
      e.note = std::string("fell back to quadrature: ") + err.what();
    }
    e.value = std::clamp(e.raw, 0.0, 1.0);
    e.clamped = e.value != e.raw;
    return e;
  };
  Bounds out;
  out.lower = eval(lo);
  out.upper = lo == hi ? out.lower : eval(hi);
  return out;
}

}  // namespace ledgerage::aoi
