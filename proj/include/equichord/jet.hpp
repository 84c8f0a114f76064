#pragma once

#include <cmath>

#include "equichord/geom.hpp"

namespace equichord {

/// Value, gradient and Hessian of a scalar function of three variables,
/// propagated through arithmetic (forward-mode, second order).
struct Jet {
  double v = 0.0;
  Vec3 g = Vec3::Zero();
  Mat3 h = Mat3::Zero();

  Jet() = default;
  explicit Jet(double value) : v(value) {}
  Jet(double value, const Vec3& grad) : v(value), g(grad) {}

  static Jet variable(double value, int axis) {
    Jet j(value);
    j.g[axis] = 1.0;
    return j;
  }
};

inline Jet operator+(const Jet& a, const Jet& b) {
  Jet r;
  r.v = a.v + b.v;
  r.g = a.g + b.g;
  r.h = a.h + b.h;
  return r;
}

inline Jet operator-(const Jet& a, const Jet& b) {
  Jet r;
  r.v = a.v - b.v;
  r.g = a.g - b.g;
  r.h = a.h - b.h;
  return r;
}

inline Jet operator*(double s, const Jet& a) {
  Jet r;
  r.v = s * a.v;
  r.g = s * a.g;
  r.h = s * a.h;
  return r;
}

inline Jet operator*(const Jet& a, double s) { return s * a; }

inline Jet operator*(const Jet& a, const Jet& b) {
  Jet r;
  r.v = a.v * b.v;
  r.g = a.v * b.g + b.v * a.g;
  const Mat3 outer = a.g * b.g.transpose();
  r.h = a.v * b.h + b.v * a.h + outer + outer.transpose();
  return r;
}

inline Jet& operator+=(Jet& a, const Jet& b) {
  a.v += b.v;
  a.g += b.g;
  a.h += b.h;
  return a;
}

/// f(a) given f, f', f'' at a.v.
inline Jet chain(const Jet& a, double f, double df, double d2f) {
  Jet r;
  r.v = f;
  r.g = df * a.g;
  r.h = df * a.h + d2f * (a.g * a.g.transpose());
  return r;
}

inline Jet sqrt(const Jet& a) {
  const double s = std::sqrt(a.v);
  return chain(a, s, 0.5 / s, -0.25 / (s * a.v));
}

inline Jet pow(const Jet& a, double p) {
  const double f = std::pow(a.v, p);
  return chain(a, f, p * f / a.v, p * (p - 1.0) * f / (a.v * a.v));
}

}  // namespace equichord
