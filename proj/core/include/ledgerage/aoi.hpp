#pragma once

#include <string>

#include "ledgerage/latency.hpp"
#include "ledgerage/numerics.hpp"

namespace ledgerage::aoi {

using latency::GammaParams;
using numerics::SeriesControl;

struct AoiModel {
  GammaParams gamma;
  double rho = 1.0;   // effective arrival rate, 1/s
  double t_tx = 0.0;  // transmission latency, s

  void validate() const;
  // E[T_k] = 1/rho + alpha/beta, the mean inter-update time.
  double mean_cycle() const;
};

struct TargetAoi {
  double v = 0.0;

  // Slack left to the consensus process: (v - t_tx)^+.
  double slack(const AoiModel& model) const;
};

enum class Method { Series, Quadrature };

struct Evaluation {
  double value = 0.0;  // clamped to [0, 1]
  double raw = 0.0;    // before clamping
  Method method = Method::Series;
  bool clamped = false;
  std::string note;  // why a fallback happened, empty otherwise
};

struct Bounds {
  Evaluation lower;  // floor(alpha)
  Evaluation upper;  // ceil(alpha)
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

double average_aoi(const AoiModel& model);

// Violation probability P[AoI >= v]. Falls back to quadrature when the
// series does not converge or lands outside [0, 1].
Evaluation aoi_violation(const AoiModel& model, TargetAoi v, const SeriesControl& ctl = {});

// Series only; throws ConvergenceError. Returns the unclamped value.
double aoi_violation_series(const AoiModel& model, TargetAoi v, const SeriesControl& ctl = {});

// Finite double sum for integer shape. Throws SingularityError when beta ~ rho.
double aoi_violation_integer(const AoiModel& model, TargetAoi v);

// Integer-shape bounds with floor and ceil of alpha. A bound that hits the
// beta ~ rho singularity is evaluated by quadrature and marked as such.
Bounds aoi_violation_bounds(const AoiModel& model, TargetAoi v);

// Peak-AoI violation probability P[peak >= v].
Evaluation paoi_violation(const AoiModel& model, TargetAoi v, const SeriesControl& ctl = {});

// Independent evaluation of P_v by adaptive 2-D quadrature against the Gamma density.
QuadratureResult aoi_violation_quadrature(const AoiModel& model, TargetAoi v);

std::string method_name(Method m);

// Term-by-term evaluation of the closed-form expansions as written. These alternate in
// sign and only hold up when beta < 2 rho and beta*t_v, rho*t_v stay small;
// they are kept as a cross-check of the production evaluators.
namespace literal {
double violation(const AoiModel& model, TargetAoi v, const SeriesControl& ctl = {});
double peak_violation(const AoiModel& model, TargetAoi v, const SeriesControl& ctl = {});
}  // namespace literal

}  // namespace ledgerage::aoi
