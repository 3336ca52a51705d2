#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "ledgerage/aoi.hpp"
#include "ledgerage/errors.hpp"

namespace ledgerage::aoi {

namespace {

constexpr double kInnerTol = 1e-12;
constexpr double kOuterTol = 1e-10;
constexpr double kMaxError = 1e-7;

}  // namespace

// P_v = E[T_k^v] / E[T_k] with T_k^v = min((X' + X + T_int - T)^+, X + T_int),
// X' the previous consensus latency. T_int is integrated in closed form; X'
// and X by nested tanh-sinh / exp-sinh quadrature of the Gamma density.
QuadratureResult aoi_violation_quadrature(const AoiModel& model, TargetAoi v) {
  model.validate();
  const double T = v.slack(model);
  if (T == 0.0) return {1.0, 0.0};
  const double r = model.rho;
  const latency::GammaParams g = model.gamma;
  const double mean_cycle = model.mean_cycle();
  auto f = [&g](double x) { return latency::gamma_pdf(g, x); };

  boost::math::quadrature::tanh_sinh<double> outer_ts;
  boost::math::quadrature::tanh_sinh<double> inner_ts;
  boost::math::quadrature::exp_sinh<double> inner_es;
  boost::math::quadrature::exp_sinh<double> outer_es;

  double inner_err = 0.0;
  // E[(X + T_int - c)^+] for c >= 0.
  auto excess = [&](double c) {
    double err1 = 0.0;
    double err2 = 0.0;
    double below = 0.0;
    if (c > 0.0) {
      below = inner_ts.integrate(
          [&](double w) { return f(w) * std::exp(-r * (c - w)) / r; }, 0.0, c, kInnerTol, &err1);
    }
    const double above = inner_es.integrate(
        [&](double u) { return f(c + u) * (u + 1.0 / r); }, 0.0,
        std::numeric_limits<double>::infinity(), kInnerTol, &err2);
    inner_err = std::max(inner_err, err1 + err2);
    return below + above;
  };

  try {
    double err_outer = 0.0;
    double err_tail = 0.0;
    const double body = outer_ts.integrate([&](double x) { return f(x) * excess(T - x); }, 0.0, T,
                                           kOuterTol, &err_outer);
    const double tail = outer_es.integrate([&](double u) { return f(T + u); }, 0.0,
                                           std::numeric_limits<double>::infinity(), kOuterTol,
                                           &err_tail);
    const double value = (body + mean_cycle * tail) / mean_cycle;
    const double error = (err_outer + inner_err + mean_cycle * err_tail) / mean_cycle;
    if (!std::isfinite(value) || error > kMaxError) {
      std::ostringstream os;
      os << "quadrature did not reach the requested accuracy (estimate " << error << ")";
      throw NumericError(os.str(), error);
    }
    return {value, error};
  } catch (const NumericError&) {
    throw;
  } catch (const std::exception& e) {
    throw NumericError(std::string("quadrature failed: ") + e.what(),
                       std::numeric_limits<double>::infinity());
  }
}

}  // namespace ledgerage::aoi
