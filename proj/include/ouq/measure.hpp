#pragma once

// Discrete measures built from weighted Dirac masses, and their tensor
// products.
//
// Weights are stored as given (not necessarily summing to one); callers
// normalize when they need a probability measure. expectation() and
// event_probability() refuse factors that are not normalized.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ouq {

inline constexpr double kNormalizationTolerance = 1e-9;

/// Response function on R^n; the argument holds one coordinate per factor.
using Response = std::function<double(std::span<const double>)>;
using Predicate = std::function<bool(std::span<const double>)>;

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  bool operator==(const Interval&) const = default;
};

/// One weighted Dirac mass.
struct SupportPoint {
  double weight = 0.0;
  double position = 0.0;

  bool operator==(const SupportPoint&) const = default;
};

class DiscreteMeasure {
 public:
  /// Requires at least one point, nonnegative weights, finite positions and
  /// lower < upper. Positions outside [lower, upper] are accepted: shifting
  /// and rescaling may move points out of the axis box, and keeping points in
  /// the box is left to the optimizer.
  DiscreteMeasure(std::vector<SupportPoint> points, double lower, double upper);

  /// Convenience constructor from parallel weight/position arrays.
  DiscreteMeasure(std::span<const double> weights,
                  std::span<const double> positions, double lower,
                  double upper);

  const std::vector<SupportPoint>& points() const noexcept { return points_; }
  std::vector<double> weights() const;
  std::vector<double> coords() const;
  std::size_t npts() const noexcept { return points_.size(); }
  double lower() const noexcept { return bounds_.lower; }
  double upper() const noexcept { return bounds_.upper; }
  Interval bounds() const noexcept { return bounds_; }

  double mass() const noexcept;
  /// Centre of mass (sum w*x)/(sum w). Throws ZeroMassMeasure when mass <= 0.
  double mean() const;
  /// max(position) - min(position).
  double range() const noexcept;
  bool within_bounds() const noexcept;

  bool operator==(const DiscreteMeasure&) const = default;

 private:
  std::vector<SupportPoint> points_;
  Interval bounds_;
};

DiscreteMeasure normalize(const DiscreteMeasure& m);
DiscreteMeasure set_mean(const DiscreteMeasure& m, double target);
DiscreteMeasure set_range(const DiscreteMeasure& m, double target);

/// Tensor product of one-dimensional discrete measures.
///
/// Atoms are enumerated lexicographically: factor 0 is the slowest index and
/// the last factor the fastest, so {a1,a2} x {b1,b2} yields
/// (a1,b1), (a1,b2), (a2,b1), (a2,b2).
class ProductMeasure {
 public:
  explicit ProductMeasure(std::vector<DiscreteMeasure> factors);

  std::size_t dimension() const noexcept { return factors_.size(); }
  const DiscreteMeasure& factor(std::size_t i) const { return factors_.at(i); }
  const std::vector<DiscreteMeasure>& factors() const noexcept {
    return factors_;
  }

  /// Number of product atoms, the product of the factor sizes.
  std::size_t npts() const noexcept;
  std::vector<double> weights() const;
  std::vector<std::vector<double>> coords() const;

  /// Visits every atom as (product weight, coordinates) in enumeration order.
  void for_each_atom(
      const std::function<void(double, std::span<const double>)>& visit) const;

  bool operator==(const ProductMeasure&) const = default;

 private:
  std::vector<DiscreteMeasure> factors_;
};

ProductMeasure pack(std::vector<DiscreteMeasure> factors);
std::vector<DiscreteMeasure> unpack(const ProductMeasure& product);

struct ParamLayout {
  std::vector<std::size_t> npts_per_dim;
  std::vector<Interval> bounds_per_dim;

  std::size_t dimension() const noexcept { return npts_per_dim.size(); }
  /// Flattened parameter count, sum of 2*npts over the factors.
  std::size_t size() const noexcept;
  void validate() const;

  bool operator==(const ParamLayout&) const = default;
};

ParamLayout layout_of(const ProductMeasure& product);

/// Per factor in order: the npts weights, then the npts positions.
std::vector<double> flatten(const ProductMeasure& product);
ProductMeasure unflatten(std::span<const double> params,
                         const ParamLayout& layout);

double expectation(const ProductMeasure& product, const Response& f);
double event_probability(const ProductMeasure& product,
                         const Predicate& predicate);

}  // namespace ouq
