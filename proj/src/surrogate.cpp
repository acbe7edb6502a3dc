#include "ouq/surrogate.hpp"

#include <algorithm>
#include <cmath>

#include "ouq/errors.hpp"

namespace ouq::sphir {

namespace {

void check_domain(double h, double theta) {
  if (!(h > 0.0) || !std::isfinite(h)) raise(ErrorCode::DomainError, "thickness must be positive");
  if (!(theta >= 0.0 && theta < std::numbers::pi / 2.0)) {
    raise(ErrorCode::DomainError, "obliquity must lie in [0, pi/2)");
  }
}

}  // namespace

void SurrogateParams::validate() const {
  for (double x : {H0, s, n, K, p, u, m_exp, Dp}) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      raise(ErrorCode::ValidationError, "surrogate parameters must be positive and finite");
    }
  }
}

double ballistic_limit(double h, double theta, const SurrogateParams& params) {
  check_domain(h, theta);
  return params.H0 * std::pow(h / std::pow(std::cos(theta), params.n), params.s);
}

double perforation_area(double h, double theta, double v, const SurrogateParams& params) {
  check_domain(h, theta);
  if (!(v >= 0.0) || !std::isfinite(v)) raise(ErrorCode::DomainError, "speed must be nonnegative");
  const double v_bl = ballistic_limit(h, theta, params);
  if (v <= v_bl) return 0.0;
  const double excess = std::max(0.0, std::tanh(v / v_bl - 1.0));
  return params.K * std::pow(h / params.Dp, params.p) *
         std::pow(std::cos(theta), params.u) * std::pow(excess, params.m_exp);
}

Response make_response(const SurrogateParams& params) {
  params.validate();
  return [params](std::span<const double> x) {
    if (x.size() != 3) raise(ErrorCode::ArityMismatch, "surrogate takes (h, theta, v)");
    return perforation_area(x[0], x[1], x[2], params);
  };
}

}  // namespace ouq::sphir
