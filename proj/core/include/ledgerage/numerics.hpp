#pragma once

#include <cstddef>

namespace ledgerage::numerics {

struct SeriesControl {
  double rel_tolerance = 1e-12;
  int max_terms = 500;

  void validate() const;
};

double ln_gamma(double x);

// Regularized incomplete gamma functions P(a, x) and Q(a, x) = 1 - P(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Unregularized: gamma(a, x) and Gamma(a, x).
double lower_inc_gamma(double a, double x);
double upper_inc_gamma(double a, double x);

double ln_beta(double a, double b);
double beta_fn(double a, double b);

// Confluent hypergeometric 1F1(a; b; z). Negative z goes through the
// Kummer transform so the summed series has terms of one sign when a, b > 0.
double kummer_1f1(double a, double b, double z, const SeriesControl& ctl = {});

// log 1F1(a; b; z) for a >= 0, b > 0, z >= 0, safe past the overflow of exp.
double log_kummer_1f1(double a, double b, double z, const SeriesControl& ctl = {});

namespace detail {
// Plain power series, no transform. Exposed for tests.
double kummer_1f1_series(double a, double b, double z, const SeriesControl& ctl);
}  // namespace detail

// Running sum with compensated addition and the "three consecutive small
// terms" stopping rule shared by every series in the library.
class SeriesSum {
 public:
  explicit SeriesSum(const SeriesControl& ctl, int min_terms = 0);

  // Returns true once the sum has converged.
  bool add(double term);

  double value() const { return sum_ + comp_; }
  int terms() const { return terms_; }
  double last_term() const { return last_; }
  bool exhausted() const { return terms_ >= max_terms_; }

 private:
  double tol_;
  int max_terms_;
  int min_terms_;
  double sum_ = 0.0;
  double comp_ = 0.0;
  double last_ = 0.0;
  int terms_ = 0;
  int small_run_ = 0;
};

}  // namespace ledgerage::numerics
