#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "ledgerage/errors.hpp"
#include "ledgerage/latency.hpp"

namespace ledgerage::latency {

namespace {

// Measured on a Hyperledger Fabric v1.3 testbed, averaged over five runs of
// 1000 transactions each. Columns: knob value, alpha, beta, average latency,
// SD, skewness, KS statistic. Rows are copied verbatim.
constexpr std::array<HlfParamRow, 8> kTargetStp{{
    {Knob::TargetStp, 0.3, {5.64, 3.01}, 2.42, 0.95, 0.093, 0.0732},
    {Knob::TargetStp, 0.4, {5.94, 2.45}, 2.42, 0.92, 0.086, 0.0623},
    {Knob::TargetStp, 0.5, {5.39, 2.85}, 2.17, 0.87, 0.095, 0.0506},
    {Knob::TargetStp, 0.6, {5.42, 2.84}, 1.90, 0.76, 0.097, 0.0504},
    {Knob::TargetStp, 0.7, {7.18, 3.73}, 1.92, 0.67, 0.071, 0.0462},
    {Knob::TargetStp, 0.8, {7.71, 4.12}, 1.87, 0.63, 0.066, 0.0423},
    {Knob::TargetStp, 0.9, {7.50, 4.35}, 1.73, 0.60, 0.068, 0.0369},
    {Knob::TargetStp, 1.0, {6.57, 3.82}, 1.76, 0.76, 0.085, 0.0532},
}};

constexpr std::array<HlfParamRow, 8> kBlockSize{{
    {Knob::BlockSize, 3, {1.62, 0.30}, 5.71, 4.03, 0.342, 0.0831},
    {Knob::BlockSize, 5, {2.90, 1.38}, 2.16, 1.25, 0.182, 0.0333},
    {Knob::BlockSize, 7, {4.35, 2.58}, 1.70, 0.85, 0.121, 0.0498},
    {Knob::BlockSize, 10, {5.24, 3.30}, 1.59, 0.74, 0.099, 0.0495},
    {Knob::BlockSize, 12, {5.81, 3.66}, 1.58, 0.63, 0.074, 0.0382},
    {Knob::BlockSize, 15, {6.95, 3.85}, 1.80, 0.65, 0.074, 0.0381},
    {Knob::BlockSize, 20, {5.42, 2.84}, 1.90, 0.76, 0.097, 0.0504},
    {Knob::BlockSize, 25, {4.85, 2.36}, 2.05, 0.86, 0.107, 0.0604},
}};

constexpr std::array<HlfParamRow, 11> kTimeout{{
    {Knob::Timeout, 0.5, {2.74, 0.89}, 3.08, 2.00, 0.194, 0.0420},
    {Knob::Timeout, 0.6, {4.26, 2.04}, 2.10, 1.07, 0.122, 0.0452},
    {Knob::Timeout, 0.7, {8.28, 5.40}, 1.53, 0.54, 0.061, 0.0494},
    {Knob::Timeout, 0.75, {6.78, 5.19}, 1.30, 0.47, 0.076, 0.0489},
    {Knob::Timeout, 1.0, {6.96, 4.65}, 1.50, 0.54, 0.075, 0.0588},
    {Knob::Timeout, 1.25, {9.62, 5.37}, 1.79, 0.55, 0.053, 0.0446},
    {Knob::Timeout, 1.50, {9.86, 5.20}, 1.89, 0.56, 0.052, 0.0603},
    {Knob::Timeout, 2.0, {6.79, 3.62}, 1.87, 0.66, 0.075, 0.0535},
    {Knob::Timeout, 2.5, {5.64, 3.01}, 1.97, 0.72, 0.091, 0.0497},
    {Knob::Timeout, 3.0, {5.42, 2.84}, 1.89, 0.76, 0.097, 0.0504},
    {Knob::Timeout, 3.5, {5.39, 2.85}, 1.89, 0.75, 0.091, 0.0503},
}};

}  // namespace

std::string_view knob_name(Knob k) {
  switch (k) {
    case Knob::TargetStp: return "target_stp";
    case Knob::BlockSize: return "block_size";
    case Knob::Timeout: return "timeout";
  }
  return "unknown";
}

Knob parse_knob(std::string_view name) {
  if (name == "target_stp") return Knob::TargetStp;
  if (name == "block_size") return Knob::BlockSize;
  if (name == "timeout") return Knob::Timeout;
  throw DomainError("unknown knob '" + std::string(name) +
                    "' (expected target_stp, block_size or timeout)");
}

std::span<const HlfParamRow> table_rows(Knob knob) {
  switch (knob) {
    case Knob::TargetStp: return kTargetStp;
    case Knob::BlockSize: return kBlockSize;
    case Knob::Timeout: return kTimeout;
  }
  return {};
}

const HlfParamRow& lookup_params(Knob knob, double value) {
  for (const auto& row : table_rows(knob)) {
    if (std::fabs(row.knob_value - value) <= 1e-9 * std::max(1.0, std::fabs(value))) return row;
  }
  std::ostringstream os;
  os << "no measured row for " << knob_name(knob) << " = " << value << "; available:";
  for (const auto& row : table_rows(knob)) os << ' ' << row.knob_value;
  throw NotFoundError(os.str());
}

const HlfParamRow& nearest_row(Knob knob, double value) {
  const auto rows = table_rows(knob);
  const HlfParamRow* best = &rows.front();
  for (const auto& row : rows) {
    if (std::fabs(row.knob_value - value) < std::fabs(best->knob_value - value)) best = &row;
  }
  return *best;
}

}  // namespace ledgerage::latency
