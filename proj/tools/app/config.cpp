#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>

#include "ledgerage/errors.hpp"

namespace ledgerage::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& field) {
  const std::string t = trim(text);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError(field + ": expected a number, got '" + text + "'");
  }
  return v;
}

std::uint64_t parse_u64(const std::string& text, const std::string& field) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    // Accept integral values written in floating notation, e.g. 2e5.
    const double d = parse_double(text, field);
    if (!(d >= 0.0) || d != std::floor(d) || d > 1.8e19) {
      throw ConfigError(field + ": expected a non-negative integer, got '" + text + "'");
    }
    return static_cast<std::uint64_t>(d);
  }
  return v;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

struct KeySpec {
  const char* key;
  Setter set;
};

const std::vector<KeySpec>& key_specs() {
  static const std::vector<KeySpec> specs = {
      {"channel.P_watts", [](auto& c, auto& v) { c.channel.P_watts = parse_double(v, "channel.P_watts"); }},
      {"channel.N0_dbm_per_hz",
       [](auto& c, auto& v) { c.channel.N0_dbm_per_hz = parse_double(v, "channel.N0_dbm_per_hz"); }},
      {"channel.W_hz", [](auto& c, auto& v) { c.channel.W_hz = parse_double(v, "channel.W_hz"); }},
      {"channel.lambda_per_km2",
       [](auto& c, auto& v) { c.channel.lambda_per_km2 = parse_double(v, "channel.lambda_per_km2"); }},
      {"channel.l_m", [](auto& c, auto& v) { c.channel.l_m = parse_double(v, "channel.l_m"); }},
      {"channel.n", [](auto& c, auto& v) { c.channel.n = parse_double(v, "channel.n"); }},
      {"rho_s", [](auto& c, auto& v) { c.rho_s = parse_double(v, "rho_s"); }},
      {"zeta", [](auto& c, auto& v) { c.zeta = parse_double(v, "zeta"); }},
      {"D_bits", [](auto& c, auto& v) { c.D_bits = parse_double(v, "D_bits"); }},
      {"gamma.source", [](auto&, auto&) {}},
      {"gamma.alpha", [](auto& c, auto& v) { c.gamma_source.params.alpha = parse_double(v, "gamma.alpha"); }},
      {"gamma.beta", [](auto& c, auto& v) { c.gamma_source.params.beta = parse_double(v, "gamma.beta"); }},
      {"gamma.knob",
       [](auto& c, auto& v) {
         try {
           c.gamma_source.knob = latency::parse_knob(trim(v));
         } catch (const DomainError& e) {
           throw ConfigError(std::string("gamma.knob: ") + e.what());
         }
       }},
      {"gamma.value", [](auto& c, auto& v) { c.gamma_source.value = parse_double(v, "gamma.value"); }},
      {"gamma.trace", [](auto& c, auto& v) { c.gamma_source.trace_path = trim(v); }},
      {"v_grid", [](auto& c, auto& v) { c.v_grid = parse_number_list(v, "v_grid"); }},
      {"sim.seed", [](auto& c, auto& v) { c.sim.seed = parse_u64(v, "sim.seed"); }},
      {"sim.stop_updates", [](auto& c, auto& v) { c.sim.stop_updates = parse_u64(v, "sim.stop_updates"); }},
      {"sim.stop_horizon", [](auto& c, auto& v) { c.sim.stop_horizon = parse_double(v, "sim.stop_horizon"); }},
      {"sim.max_events", [](auto& c, auto& v) { c.sim.max_events = parse_u64(v, "sim.max_events"); }},
      {"sim.dump_path", [](auto& c, auto& v) { c.sim.dump_path = trim(v); }},
      {"series.rel_tolerance",
       [](auto& c, auto& v) { c.series.rel_tolerance = parse_double(v, "series.rel_tolerance"); }},
      {"series.max_terms",
       [](auto& c, auto& v) { c.series.max_terms = static_cast<int>(parse_u64(v, "series.max_terms")); }},
      {"output", [](auto& c, auto& v) { c.output = trim(v); }},
  };
  return specs;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void validate(const ExperimentConfig& c) {
  const auto& ch = c.channel;
  require(ch.P_watts > 0 && std::isfinite(ch.P_watts), "channel.P_watts must be positive");
  require(std::isfinite(ch.N0_dbm_per_hz), "channel.N0_dbm_per_hz must be finite");
  require(ch.W_hz > 0 && std::isfinite(ch.W_hz), "channel.W_hz must be positive");
  require(ch.lambda_per_km2 > 0 && std::isfinite(ch.lambda_per_km2),
          "channel.lambda_per_km2 must be positive");
  require(ch.l_m > 0 && std::isfinite(ch.l_m), "channel.l_m must be positive");
  require(ch.n > 2 && std::isfinite(ch.n), "channel.n must exceed 2");
  require(c.rho_s > 0 && std::isfinite(c.rho_s), "rho_s must be positive");
  require(c.zeta > 0 && c.zeta <= 1, "zeta must lie in (0, 1]");
  require(c.D_bits > 0 && std::isfinite(c.D_bits), "D_bits must be positive");
  require(!c.v_grid.empty(), "v_grid must not be empty");
  for (std::size_t i = 0; i < c.v_grid.size(); ++i) {
    require(c.v_grid[i] >= 0 && std::isfinite(c.v_grid[i]), "v_grid entries must be >= 0");
    require(i == 0 || c.v_grid[i] > c.v_grid[i - 1], "v_grid must be strictly increasing");
  }
  if (c.gamma_source.kind == GammaSource::Kind::Explicit) {
    require(c.gamma_source.params.alpha > 0 && c.gamma_source.params.beta > 0,
            "gamma.alpha and gamma.beta must both be given and positive");
  }
  require(!(c.sim.stop_updates && c.sim.stop_horizon),
          "sim.stop_updates and sim.stop_horizon are mutually exclusive");
  require(!c.sim.stop_updates || *c.sim.stop_updates >= 1, "sim.stop_updates must be >= 1");
  require(!c.sim.stop_horizon || (*c.sim.stop_horizon > 0 && std::isfinite(*c.sim.stop_horizon)),
          "sim.stop_horizon must be positive");
  require(c.sim.max_events >= 1, "sim.max_events must be >= 1");
  require(c.series.rel_tolerance > 0, "series.rel_tolerance must be positive");
  require(c.series.max_terms >= 1, "series.max_terms must be >= 1");
}

}  // namespace

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double per_km2_to_per_m2(double per_km2) { return per_km2 / 1e6; }

channel::ChannelParams ChannelInputs::to_si() const {
  channel::ChannelParams p;
  p.P = P_watts;
  p.N0 = dbm_to_watts(N0_dbm_per_hz);
  p.W = W_hz;
  p.lambda_bs = per_km2_to_per_m2(lambda_per_km2);
  p.l = l_m;
  p.n = n;
  return p;
}

std::vector<double> parse_number_list(const std::string& text, const std::string& field) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_double(item, field));
  }
  if (out.empty()) throw ConfigError(field + ": empty list");
  return out;
}

ConfigMap parse_config_text(std::istream& in, const std::string& source_name) {
  ConfigMap map;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source_name + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw ConfigError(source_name + ":" + std::to_string(line_no) + ": missing key");
    }
    map[key] = trim(line.substr(eq + 1));
  }
  return map;
}

ConfigMap read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config_text(in, path);
}

void apply_override(ConfigMap& map, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || trim(assignment.substr(0, eq)).empty()) {
    throw ConfigError("override '" + assignment + "' is not of the form key=value");
  }
  map[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

std::vector<std::string> known_keys() {
  std::vector<std::string> keys;
  for (const auto& s : key_specs()) keys.emplace_back(s.key);
  return keys;
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
  const char* env = std::getenv(kSeedEnvVar);
  if (env == nullptr || *env == '\0') return fallback;
  return parse_u64(env, kSeedEnvVar);
}

ExperimentConfig build_config(const ConfigMap& map, std::uint64_t default_seed) {
  ExperimentConfig c;
  c.sim.seed = default_seed;
  c.gamma_source.params = {0.0, 0.0};
  for (const auto& [key, value] : map) {
    const auto& specs = key_specs();
    auto it = std::find_if(specs.begin(), specs.end(),
                           [&](const KeySpec& s) { return key == s.key; });
    if (it == specs.end()) {
      std::string msg = "unknown config key '" + key + "'; known keys:";
      for (const auto& s : specs) msg += std::string(" ") + s.key;
      throw ConfigError(msg);
    }
    it->set(c, value);
  }

  const bool has_explicit = map.count("gamma.alpha") || map.count("gamma.beta");
  const bool has_table = map.count("gamma.knob") || map.count("gamma.value");
  const bool has_trace = map.count("gamma.trace") > 0;
  auto src = map.find("gamma.source");
  if (src != map.end()) {
    const std::string kind = trim(src->second);
    if (kind == "explicit") {
      c.gamma_source.kind = GammaSource::Kind::Explicit;
    } else if (kind == "table") {
      c.gamma_source.kind = GammaSource::Kind::Table;
    } else if (kind == "trace") {
      c.gamma_source.kind = GammaSource::Kind::Trace;
    } else {
      throw ConfigError("gamma.source: expected explicit, table or trace, got '" + kind + "'");
    }
  } else if (has_explicit + has_table + has_trace > 1) {
    throw ConfigError("gamma: give exactly one of gamma.alpha/beta, gamma.knob/value, gamma.trace");
  } else if (has_explicit) {
    c.gamma_source.kind = GammaSource::Kind::Explicit;
  } else if (has_trace) {
    c.gamma_source.kind = GammaSource::Kind::Trace;
  } else {
    c.gamma_source.kind = GammaSource::Kind::Table;
  }
  using K = GammaSource::Kind;
  const K kind = c.gamma_source.kind;
  if ((kind != K::Explicit && has_explicit) || (kind != K::Table && has_table) ||
      (kind != K::Trace && has_trace)) {
    throw ConfigError("gamma: keys for more than one gamma source given");
  }
  if (kind == K::Table && !map.count("gamma.value")) {
    if (c.gamma_source.knob != latency::Knob::TargetStp) {
      throw ConfigError("gamma.value: required for gamma.knob = " +
                        std::string(latency::knob_name(c.gamma_source.knob)));
    }
    c.gamma_source.value = c.zeta;  // measured row for the configured target STP
  }
  if (kind == K::Trace && c.gamma_source.trace_path.empty()) {
    throw ConfigError("gamma.trace: path required when gamma.source = trace");
  }
  validate(c);
  return c;
}

}  // namespace ledgerage::cli
