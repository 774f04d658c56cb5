#pragma once

#include <cstdint>
#include <random>

namespace bitspectra {

// Seeded generator with portable bounded sampling. The engine is fully specified by the
// standard; the std:: distributions are not, so sampling is done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [lo, hi], inclusive. Rejection sampling, no modulo bias.
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi);

  // Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Log-uniform integer in [lo, hi], lo >= 1.
  std::uint64_t log_uniform(std::uint64_t lo, std::uint64_t hi);

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer over (seed, stream); used to give every generated item its own seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace bitspectra
