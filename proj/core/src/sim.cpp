#include "ledgerage/sim.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "ledgerage/errors.hpp"
#include "ledgerage/rng.hpp"

namespace ledgerage::sim {

void SimConfig::validate() const {
  gamma.validate();
  if (!(rho_s > 0.0) || !std::isfinite(rho_s)) throw DomainError("rho_s must be positive");
  if (!(zeta > 0.0 && zeta <= 1.0)) throw DomainError("zeta must lie in (0, 1]");
  if (!(t_tx >= 0.0) || !std::isfinite(t_tx)) throw DomainError("t_tx must be finite and >= 0");
  if (!(stop.value > 0.0) || !std::isfinite(stop.value)) {
    throw DomainError("stop value must be positive and finite");
  }
  if (max_events == 0) throw DomainError("max_events must be positive");
}

double SimConfig::update_rate() const {
  return 1.0 / (1.0 / (rho_s * zeta) + gamma.alpha / gamma.beta);
}

RunCounts simulate_stream(const SimConfig& config,
                          const std::function<void(const Update&)>& on_update) {
  config.validate();
  Rng gen(derive_seed(config.seed, static_cast<std::uint64_t>(Stream::Generation)));
  Rng thin(derive_seed(config.seed, static_cast<std::uint64_t>(Stream::Thinning)));
  Rng consensus(derive_seed(config.seed, static_cast<std::uint64_t>(Stream::Consensus)));

  const bool by_horizon = config.stop.kind == StopRule::Kind::Horizon;
  const auto target = static_cast<std::uint64_t>(std::ceil(config.stop.value));
  RunCounts c;
  double G = 0.0;
  double u_last = 0.0;
  for (;;) {
    G += gen.exponential(config.rho_s);
    if (by_horizon && G >= config.stop.value) break;
    if (++c.generated > config.max_events) {
      std::ostringstream os;
      os << "simulation exceeded " << config.max_events << " generated packets with "
         << c.effective << " effective updates; stop condition unreachable";
      throw RunawayError(os.str());
    }
    if (!(thin.uniform() < config.zeta)) continue;
    ++c.arrivals;
    const double A = G + config.t_tx;
    if (A < u_last) {
      ++c.invalid;  // committed after an intervening update: fails MVCC
      continue;
    }
    const double U = A + latency::sample_latency(config.gamma, consensus);
    u_last = U;
    ++c.effective;
    on_update(Update{G, A, U});
    if (!by_horizon && c.effective >= target) break;
  }
  c.total_time = u_last;
  return c;
}

SamplePath simulate(const SimConfig& config) {
  SamplePath path;
  if (config.stop.kind == StopRule::Kind::Updates) {
    path.updates.reserve(static_cast<std::size_t>(config.stop.value));
  }
  const RunCounts c = simulate_stream(config, [&](const Update& u) { path.updates.push_back(u); });
  path.invalid_count = c.invalid;
  path.arrivals = c.arrivals;
  path.total_time = c.total_time;
  return path;
}

void write_path_csv(std::ostream& out, const SamplePath& path) {
  out << "k,G,A,U\n";
  char buf[128];
  std::size_t k = 0;
  for (const auto& u : path.updates) {
    const int n = std::snprintf(buf, sizeof buf, "%zu,%.9f,%.9f,%.9f\n", ++k, u.G, u.A, u.U);
    out.write(buf, n);
  }
}

}  // namespace ledgerage::sim
