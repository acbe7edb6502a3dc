#include "ouq/measure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ouq/errors.hpp"

namespace ouq {

namespace {

void require_normalized(const ProductMeasure& product) {
  for (std::size_t i = 0; i < product.dimension(); ++i) {
    const double mass = product.factor(i).mass();
    if (std::abs(mass - 1.0) > kNormalizationTolerance) {
      raise(ErrorCode::NonNormalizedFactor,
            "factor " + std::to_string(i) + " has mass " + std::to_string(mass));
    }
  }
}

std::vector<SupportPoint> zip_points(std::span<const double> weights,
                                     std::span<const double> positions) {
  if (weights.size() != positions.size()) {
    raise(ErrorCode::LengthMismatch, "weights and positions differ in length");
  }
  std::vector<SupportPoint> points(weights.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    points[i] = {weights[i], positions[i]};
  }
  return points;
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<SupportPoint> points, double lower,
                                 double upper)
    : points_(std::move(points)), bounds_{lower, upper} {
  if (points_.empty()) {
    raise(ErrorCode::InvalidArgument, "a discrete measure needs a support point");
  }
  if (!(std::isfinite(lower) && std::isfinite(upper) && lower < upper)) {
    raise(ErrorCode::InvalidArgument, "axis bounds must be finite with lower < upper");
  }
  for (const auto& p : points_) {
    if (!(p.weight >= 0.0) || !std::isfinite(p.weight)) {
      raise(ErrorCode::InvalidArgument, "support weights must be finite and nonnegative");
    }
    if (!std::isfinite(p.position)) {
      raise(ErrorCode::InvalidArgument, "support positions must be finite");
    }
  }
}

DiscreteMeasure::DiscreteMeasure(std::span<const double> weights,
                                 std::span<const double> positions,
                                 double lower, double upper)
    : DiscreteMeasure(zip_points(weights, positions), lower, upper) {}

std::vector<double> DiscreteMeasure::weights() const {
  std::vector<double> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.weight);
  return out;
}

std::vector<double> DiscreteMeasure::coords() const {
  std::vector<double> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(p.position);
  return out;
}

double DiscreteMeasure::mass() const noexcept {
  double total = 0.0;
  for (const auto& p : points_) total += p.weight;
  return total;
}

double DiscreteMeasure::mean() const {
  const double total = mass();
  if (!(total > 0.0)) raise(ErrorCode::ZeroMassMeasure, "mean of a zero-mass measure");
  double moment = 0.0;
  for (const auto& p : points_) moment += p.weight * p.position;
  return moment / total;
}

double DiscreteMeasure::range() const noexcept {
  const auto [lo, hi] = std::minmax_element(
      points_.begin(), points_.end(),
      [](const SupportPoint& a, const SupportPoint& b) { return a.position < b.position; });
  return hi->position - lo->position;
}

bool DiscreteMeasure::within_bounds() const noexcept {
  return std::all_of(points_.begin(), points_.end(), [&](const SupportPoint& p) {
    return p.position >= bounds_.lower && p.position <= bounds_.upper;
  });
}

DiscreteMeasure normalize(const DiscreteMeasure& m) {
  const double total = m.mass();
  if (!(total > 0.0)) raise(ErrorCode::ZeroMassMeasure, "cannot normalize a zero-mass measure");
  std::vector<SupportPoint> points = m.points();
  for (auto& p : points) p.weight /= total;
  return DiscreteMeasure(std::move(points), m.lower(), m.upper());
}

DiscreteMeasure set_mean(const DiscreteMeasure& m, double target) {
  const double offset = target - m.mean();
  std::vector<SupportPoint> points = m.points();
  for (auto& p : points) p.position += offset;
  return DiscreteMeasure(std::move(points), m.lower(), m.upper());
}

DiscreteMeasure set_range(const DiscreteMeasure& m, double target) {
  if (!(target >= 0.0) || !std::isfinite(target)) {
    raise(ErrorCode::InvalidArgument, "target range must be finite and nonnegative");
  }
  const double centre = m.mean();
  const double current = m.range();
  if (target == current) return m;
  if (current == 0.0) {
    raise(ErrorCode::DegenerateRange, "cannot rescale a measure with zero range");
  }
  const double scale = target / current;
  std::vector<SupportPoint> points = m.points();
  for (auto& p : points) p.position = centre + (p.position - centre) * scale;
  return DiscreteMeasure(std::move(points), m.lower(), m.upper());
}

ProductMeasure::ProductMeasure(std::vector<DiscreteMeasure> factors)
    : factors_(std::move(factors)) {
  if (factors_.empty()) raise(ErrorCode::EmptyFactorList, "a product measure needs a factor");
}

std::size_t ProductMeasure::npts() const noexcept {
  std::size_t n = 1;
  for (const auto& f : factors_) n *= f.npts();
  return n;
}

void ProductMeasure::for_each_atom(
    const std::function<void(double, std::span<const double>)>& visit) const {
  const std::size_t dim = factors_.size();
  std::vector<std::size_t> index(dim, 0);
  std::vector<double> point(dim);
  for (;;) {
    double weight = 1.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const SupportPoint& sp = factors_[i].points()[index[i]];
      weight *= sp.weight;
      point[i] = sp.position;
    }
    visit(weight, point);

    // odometer increment, last factor fastest
    std::size_t i = dim;
    while (i > 0) {
      --i;
      if (++index[i] < factors_[i].npts()) break;
      index[i] = 0;
      if (i == 0) return;
    }
  }
}

std::vector<double> ProductMeasure::weights() const {
  std::vector<double> out;
  out.reserve(npts());
  for_each_atom([&](double w, std::span<const double>) { out.push_back(w); });
  return out;
}

std::vector<std::vector<double>> ProductMeasure::coords() const {
  std::vector<std::vector<double>> out;
  out.reserve(npts());
  for_each_atom([&](double, std::span<const double> x) {
    out.emplace_back(x.begin(), x.end());
  });
  return out;
}

ProductMeasure pack(std::vector<DiscreteMeasure> factors) {
  return ProductMeasure(std::move(factors));
}

std::vector<DiscreteMeasure> unpack(const ProductMeasure& product) {
  return product.factors();
}

std::size_t ParamLayout::size() const noexcept {
  std::size_t n = 0;
  for (auto k : npts_per_dim) n += 2 * k;
  return n;
}

void ParamLayout::validate() const {
  if (npts_per_dim.empty()) raise(ErrorCode::EmptyFactorList, "layout has no dimensions");
  if (npts_per_dim.size() != bounds_per_dim.size()) {
    raise(ErrorCode::LengthMismatch, "layout needs one bounds pair per dimension");
  }
  for (std::size_t i = 0; i < npts_per_dim.size(); ++i) {
    if (npts_per_dim[i] == 0) {
      raise(ErrorCode::InvalidArgument, "dimension " + std::to_string(i) + " has no support points");
    }
    const auto& b = bounds_per_dim[i];
    if (!(std::isfinite(b.lower) && std::isfinite(b.upper) && b.lower < b.upper)) {
      raise(ErrorCode::InvalidArgument,
            "dimension " + std::to_string(i) + " needs finite bounds with lower < upper");
    }
  }
}

ParamLayout layout_of(const ProductMeasure& product) {
  ParamLayout layout;
  for (const auto& f : product.factors()) {
    layout.npts_per_dim.push_back(f.npts());
    layout.bounds_per_dim.push_back(f.bounds());
  }
  return layout;
}

std::vector<double> flatten(const ProductMeasure& product) {
  std::vector<double> params;
  for (const auto& f : product.factors()) {
    for (const auto& p : f.points()) params.push_back(p.weight);
    for (const auto& p : f.points()) params.push_back(p.position);
  }
  return params;
}

ProductMeasure unflatten(std::span<const double> params, const ParamLayout& layout) {
  if (params.size() != layout.size() ||
      layout.npts_per_dim.size() != layout.bounds_per_dim.size()) {
    raise(ErrorCode::LengthMismatch,
          "parameter vector has " + std::to_string(params.size()) +
              " entries, layout expects " + std::to_string(layout.size()));
  }
  std::vector<DiscreteMeasure> factors;
  factors.reserve(layout.dimension());
  std::size_t offset = 0;
  for (std::size_t i = 0; i < layout.dimension(); ++i) {
    const std::size_t k = layout.npts_per_dim[i];
    factors.emplace_back(params.subspan(offset, k), params.subspan(offset + k, k),
                         layout.bounds_per_dim[i].lower, layout.bounds_per_dim[i].upper);
    offset += 2 * k;
  }
  return ProductMeasure(std::move(factors));
}

double expectation(const ProductMeasure& product, const Response& f) {
  require_normalized(product);
  double total = 0.0;
  product.for_each_atom([&](double w, std::span<const double> x) { total += w * f(x); });
  return total;
}

double event_probability(const ProductMeasure& product, const Predicate& predicate) {
  require_normalized(product);
  double total = 0.0;
  product.for_each_atom([&](double w, std::span<const double> x) {
    if (predicate(x)) total += w;
  });
  return total;
}

}  // namespace ouq
