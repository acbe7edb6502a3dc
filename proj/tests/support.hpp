#pragma once

// Random inputs and brute-force oracles shared by the test binaries.

#include <cstdint>
#include <functional>
#include <vector>

#include "ouq/measure.hpp"
#include "ouq/rng.hpp"

namespace ouq::testing {

inline DiscreteMeasure random_measure(Rng& rng, std::size_t max_points = 4,
                                      bool normalized = false) {
  const double lower = rng.uniform(-10.0, 5.0);
  const double upper = lower + rng.uniform(0.5, 10.0);
  const std::size_t n = 1 + rng.index(max_points);
  std::vector<SupportPoint> points(n);
  double total = 0.0;
  for (auto& p : points) {
    p.weight = rng.uniform(0.01, 3.0);
    p.position = rng.uniform(lower, upper);
    total += p.weight;
  }
  if (normalized) {
    for (auto& p : points) p.weight /= total;
  }
  return DiscreteMeasure(std::move(points), lower, upper);
}

inline ProductMeasure random_product(Rng& rng, std::size_t max_dim = 4,
                                     std::size_t max_points = 4, bool normalized = true) {
  const std::size_t dim = 1 + rng.index(max_dim);
  std::vector<DiscreteMeasure> factors;
  for (std::size_t i = 0; i < dim; ++i) factors.push_back(random_measure(rng, max_points, normalized));
  return ProductMeasure(std::move(factors));
}

// Independent n-fold loop: recursion over factors, building the product
// weight and the coordinate tuple explicitly.
inline double brute_force_sum(const ProductMeasure& p,
                              const std::function<double(const std::vector<double>&)>& g) {
  const std::size_t dim = p.dimension();
  std::vector<double> x(dim);
  double total = 0.0;
  std::function<void(std::size_t, double)> rec = [&](std::size_t i, double w) {
    if (i == dim) {
      total += w * g(x);
      return;
    }
    for (const auto& sp : p.factor(i).points()) {
      x[i] = sp.position;
      rec(i + 1, w * sp.weight);
    }
  };
  rec(0, 1.0);
  return total;
}

}  // namespace ouq::testing
