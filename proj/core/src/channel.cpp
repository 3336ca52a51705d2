#include "ledgerage/channel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ledgerage/errors.hpp"

namespace ledgerage::channel {

namespace {

constexpr double kPi = std::numbers::pi;

void check_zeta(double zeta) {
  if (!(zeta > 0.0 && zeta <= 1.0)) {
    std::ostringstream os;
    os << "target STP zeta must lie in (0, 1], got " << zeta;
    throw DomainError(os.str());
  }
}

// -log stp as a function of theta.
double neg_log_stp_theta(double theta, const ChannelParams& p) {
  const double noise = std::pow(p.l, p.n) * p.N0 * p.W * theta / p.P;
  const double interference = 2.0 * p.lambda_bs * kPi * kPi * p.l * p.l *
                              std::pow(theta, 2.0 / p.n) /
                              (p.n * std::pow(p.P, 2.0 / p.n) * std::sin(2.0 * kPi / p.n));
  return noise + interference;
}

}  // namespace

void ChannelParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      std::ostringstream os;
      os << "channel parameter " << name << " must be positive and finite, got " << v;
      throw DomainError(os.str());
    }
  };
  positive(P, "P");
  positive(N0, "N0");
  positive(W, "W");
  positive(lambda_bs, "lambda_bs");
  positive(l, "l");
  positive(n, "n");
  if (!(n > 2.0)) throw DomainError("channel parameter n must exceed 2");
}

double sinr_threshold(double epsilon, const ChannelParams& params) {
  if (!(epsilon >= 0.0)) throw DomainError("target rate must be non-negative");
  return std::expm1(epsilon / params.W * std::numbers::ln2);
}

double stp(double epsilon, const ChannelParams& params) {
  params.validate();
  const double theta = sinr_threshold(epsilon, params);
  return std::exp(-neg_log_stp_theta(theta, params));
}

double max_rate(const ChannelParams& params, double zeta) {
  params.validate();
  check_zeta(zeta);
  if (zeta == 1.0) return 0.0;

  const double snr_max = params.P * std::pow(params.l, -params.n) / (params.N0 * params.W);
  double lo = 0.0;
  double hi = params.W * std::log2(1.0 + snr_max * 10.0);
  if (!(stp(hi, params) <= zeta)) {
    std::ostringstream os;
    os << "max_rate: bracket [0, " << hi << "] does not contain the root for zeta = " << zeta;
    throw NumericError(os.str(), stp(hi, params) - zeta);
  }
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (stp(mid, params) > zeta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double max_rate_n4(const ChannelParams& params, double zeta) {
  params.validate();
  check_zeta(zeta);
  if (params.n != 4.0) throw DomainError("max_rate_n4 requires pathloss exponent 4");
  if (zeta == 1.0) return 0.0;
  // -pi^2 lambda + sqrt(pi^4 lambda^2 + c), rationalized so zeta near 1 keeps its digits.
  const double a = kPi * kPi * params.lambda_bs;
  const double c = -16.0 * params.N0 * params.W * std::log(zeta);
  const double root = c / (a + std::sqrt(a * a + c));
  const double s = std::sqrt(params.P) * root / (4.0 * params.N0 * params.W * params.l * params.l);
  return params.W * std::log2(1.0 + s * s);
}

double tx_latency(double D_bits, double rate) {
  if (!(D_bits > 0.0)) throw DomainError("packet size D must be positive");
  if (rate == 0.0) {
    throw InfiniteLatencyError("transmission rate is zero (target STP of 1): latency is unbounded");
  }
  if (!(rate > 0.0)) throw DomainError("transmission rate must be positive");
  return D_bits / rate;
}

}  // namespace ledgerage::channel
