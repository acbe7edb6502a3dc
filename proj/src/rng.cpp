#include "ouq/rng.hpp"

#include <limits>

namespace ouq {

double Rng::uniform(double lower, double upper) {
  if (!(upper > lower)) return lower;
  const double x = lower + (upper - lower) * uniform01();
  // rounding can land exactly on upper, which is still inside the closed box
  return x > upper ? upper : x;
}

std::size_t Rng::index(std::size_t n) {
  // rejection sampling keeps the draw exactly uniform
  const std::uint64_t range = static_cast<std::uint64_t>(n);
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return static_cast<std::size_t>(x % range);
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t generation,
                          std::uint64_t slot) noexcept {
  return mix64(mix64(mix64(parent) ^ generation) ^ slot);
}

}  // namespace ouq
