#pragma once

// Perforation-area surrogate for a steel sphere striking a steel plate.
// Thickness h is in mm, obliquity theta in radians, speed v in km/s and the
// resulting area in mm^2.

#include <numbers>

#include "ouq/measure.hpp"

namespace ouq::sphir {

struct SurrogateParams {
  double H0 = 0.5794;  // km/s
  double s = 1.4004;
  double n = 0.4482;
  double K = 10.3936;  // mm^2
  double p = 0.4757;
  double u = 1.0275;
  double m_exp = 0.4682;
  double Dp = 1.778;  // projectile diameter, mm

  void validate() const;
};

struct InputBox {
  Interval h{1.524, 2.667};
  Interval theta{0.0, std::numbers::pi / 6.0};
  Interval v{2.1, 2.8};
};

inline constexpr double kMmPerMil = 0.0254;

constexpr double mils_to_mm(double mils) noexcept { return mils * kMmPerMil; }
constexpr double mm_to_mils(double mm) noexcept { return mm / kMmPerMil; }

/// Speed below which no perforation occurs, H0 * (h / cos(theta)^n)^s.
double ballistic_limit(double h, double theta, const SurrogateParams& params = {});

/// K (h/Dp)^p cos(theta)^u max(0, tanh(v/v_bl - 1))^m_exp; exactly zero for
/// v <= v_bl.
double perforation_area(double h, double theta, double v,
                        const SurrogateParams& params = {});

/// The surrogate as a three-argument response (h, theta, v).
Response make_response(const SurrogateParams& params = {});

}  // namespace ouq::sphir
