#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ledgerage/channel.hpp"
#include "ledgerage/latency.hpp"
#include "ledgerage/numerics.hpp"

namespace ledgerage::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kSeedEnvVar = "LEDGERAGE_SEED";

// Channel inputs in the units people quote them in.
struct ChannelInputs {
  double P_watts = 1.0;
  double N0_dbm_per_hz = -100.0;
  double W_hz = 1e6;
  double lambda_per_km2 = 1e-4;
  double l_m = 37.0;
  double n = 4.0;

  channel::ChannelParams to_si() const;
};

double dbm_to_watts(double dbm);
double per_km2_to_per_m2(double per_km2);

struct GammaSource {
  enum class Kind { Explicit, Table, Trace };
  Kind kind = Kind::Table;
  latency::GammaParams params{};
  latency::Knob knob = latency::Knob::TargetStp;
  double value = 0.6;
  std::string trace_path;
};

struct SimOverrides {
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> stop_updates;
  std::optional<double> stop_horizon;
  std::uint64_t max_events = 1'000'000'000;
  std::string dump_path;
};

struct ExperimentConfig {
  ChannelInputs channel;
  double rho_s = 15.0;
  double zeta = 0.6;
  double D_bits = 5e5;
  GammaSource gamma_source;
  std::vector<double> v_grid{1, 2, 3, 4, 5, 6, 7, 8};
  SimOverrides sim;
  numerics::SeriesControl series;
  std::string output;
};

// Flat "key = value" settings; '#' starts a comment.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_text(std::istream& in, const std::string& source_name);
ConfigMap read_config_file(const std::string& path);
// "key=value" from the command line.
void apply_override(ConfigMap& map, const std::string& assignment);

// Builds a validated config; unknown keys and malformed values are errors.
// default_seed applies when sim.seed is absent.
ExperimentConfig build_config(const ConfigMap& map, std::uint64_t default_seed = 1);

// Seed from the environment variable, or fallback when unset.
std::uint64_t seed_from_env(std::uint64_t fallback);

std::vector<double> parse_number_list(const std::string& text, const std::string& field);

std::vector<std::string> known_keys();

}  // namespace ledgerage::cli
