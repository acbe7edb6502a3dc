#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace ouq {

/// Seedable generator with platform-independent output.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The distribution transforms are implemented here because the
/// standard library distributions are not required to agree across vendors.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lower, upper]; returns lower when the interval is a point.
  double uniform(double lower, double upper);

  /// Uniform integer on [0, n); n must be positive.
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer, used to derive independent child streams.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Child seed for a nested optimizer run owned by one trial of a parent run.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t generation,
                          std::uint64_t slot) noexcept;

}  // namespace ouq
