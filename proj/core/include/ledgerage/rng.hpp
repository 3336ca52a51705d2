#pragma once

#include <cstdint>
#include <random>

namespace ledgerage {

std::uint64_t splitmix64(std::uint64_t x);

// Independent child seed for a numbered stream of a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

// mt19937_64 with distribution code written out here so that draws are
// identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  double exponential(double rate);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ledgerage
