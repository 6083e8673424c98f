#pragma once

#include <cstdint>
#include <random>

namespace hmckit {

// Seeded random stream. Each sampler owns one instance per chain and
// documents the order in which it consumes draws, so a (config, seed) pair
// reproduces a chain bit for bit within one build. Bit-exact agreement
// across standard library implementations is not promised.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // U[0, 1)
  double uniform() { return unif_(gen_); }

  // N(0, 1)
  double normal() { return norm_(gen_); }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
  std::normal_distribution<double> norm_{0.0, 1.0};
};

}  // namespace hmckit
