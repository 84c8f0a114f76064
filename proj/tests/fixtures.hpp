#pragma once

#include "equichord/body.hpp"
#include "equichord/harmonics.hpp"

namespace fixtures {

using namespace equichord;

inline Body ball(double r, const Vec3& c = Vec3::Zero()) { return Body(Ellipsoid::ball(r, c)); }
inline Body disc(double r, const Vec2& c = Vec2::Zero()) { return Body(Ellipsoid::disc(r, c)); }

/// Ellipsoid diag(1/4, 1, 1): semi-axes (2, 1, 1).
inline Body prolate() { return Body(Ellipsoid::diagonal(Vec3(0.25, 1.0, 1.0))); }

/// Ellipsoid plus amplitude * Y_{l,m} in its support function.
inline Body perturbed(const Ellipsoid& base, int l, int m, double amplitude) {
  HarmonicBody3D s = HarmonicBody3D::zeros(l);
  s.coeff(l, m) = amplitude;
  s.base = base;
  return Body(s);
}

inline Body perturbed_prolate(double amplitude = 0.05) {
  return perturbed(Ellipsoid::diagonal(Vec3(0.25, 1.0, 1.0)), 4, 0, amplitude);
}

/// Unit ball written in harmonics: h = 1 = sqrt(4 pi) Y_00.
inline HarmonicBody3D harmonic_ball(int degree, double radius = 1.0) {
  HarmonicBody3D s = HarmonicBody3D::zeros(degree);
  s.coeff(0, 0) = radius * std::sqrt(4.0 * kPi);
  return s;
}

}  // namespace fixtures
