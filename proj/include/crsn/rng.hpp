#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace crsn {

// Seedable generator with distributions implemented here rather than taken
// from <random>, whose distribution algorithms are implementation-defined.
// The engine is std::mt19937_64, which the standard pins bit-for-bit, so a
// given seed yields the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1) with 53 random mantissa bits.
  double uniform01();

  // Uniform on [lo, hi).
  double uniform(double lo, double hi);

  // Unbiased uniform index on [0, n). n must be > 0.
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer. Used to derive independent child seeds:
// child = split_seed(parent + stream).
std::uint64_t split_seed(std::uint64_t value);

inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) {
  return split_seed(parent + stream);
}

}  // namespace crsn
