#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "equichord/geom.hpp"
#include "equichord/jet.hpp"

namespace equichord {

/// {x : (x - center)^T shape (x - center) <= 1}. A planar ellipse (dim == 2)
/// lives in the xy-plane with shape(2,2) == 1 and no coupling to z.
struct Ellipsoid {
  Vec3 center = Vec3::Zero();
  Mat3 shape = Mat3::Identity();
  int dim = 3;

  static Ellipsoid ball(double radius, const Vec3& center = Vec3::Zero());
  static Ellipsoid disc(double radius, const Vec2& center = Vec2::Zero());
  /// Axis-aligned, semi-axes given.
  static Ellipsoid axes(const Vec3& semi_axes, const Vec3& center = Vec3::Zero());
  static Ellipsoid ellipse(double a, double b, const Vec2& center = Vec2::Zero());
  /// Axis-aligned from the diagonal of `shape`.
  static Ellipsoid diagonal(const Vec3& shape_diagonal, const Vec3& center = Vec3::Zero());
};

/// Planar body with support h(theta) = a0 + sum_k a_k cos k theta + b_k sin k theta.
struct FourierBody2D {
  double a0 = 1.0;
  std::vector<std::array<double, 2>> coeffs;  // (a_k, b_k), k = 1..N

  double h(double theta) const;
  double dh(double theta) const;
  double d2h(double theta) const;
};

/// Support h(u) = sum c_lm Y_lm(u), optionally added to an ellipsoid's support
/// (the "perturbed ellipsoid" family).
struct HarmonicBody3D {
  int degree = 0;
  std::vector<double> coeffs;
  std::optional<Ellipsoid> base;

  static HarmonicBody3D zeros(int degree);
  double& coeff(int l, int m);
  double coeff(int l, int m) const;
};

/// Value, gradient and Hessian of the 1-homogeneous support extension H.
/// At a unit u: gradient is the boundary point with outer normal u, and the
/// Hessian restricted to u^perp holds the radii of curvature.
struct SupportJet {
  double value = 0.0;
  Vec3 gradient = Vec3::Zero();
  Mat3 hessian = Mat3::Zero();
};

struct Violation {
  std::string invariant;
  double worst_margin = 0.0;
};

struct ValidationReport {
  bool valid = true;
  bool strictly_convex = true;
  double min_curvature = 0.0;
  std::vector<Violation> violations;
};

/// Maximum of <x, u> - h(u) and the direction attaining it.
struct SupportGap {
  double value = 0.0;
  Vec3 direction = Vec3::UnitX();
};

/// Immutable convex body. Copies share state.
class Body {
 public:
  using Rep = std::variant<Ellipsoid, FourierBody2D, HarmonicBody3D>;

  Body(Ellipsoid e);
  Body(FourierBody2D f);
  Body(HarmonicBody3D s);

  const Rep& rep() const;
  int dim() const;
  std::string kind() const;
  const Vec3& anchor() const;
  const ValidationReport& validation() const;
  bool strictly_convex() const { return validation().strictly_convex; }
  /// Upper bound on |x - anchor| over the body.
  double radius() const;

  double support(const Vec3& u) const;
  SupportJet support_jet(const Vec3& y) const;
  Vec3 boundary_point(const Vec3& u) const;
  double membership(const Vec3& x) const;

  /// max over unit u of <x,u> - h(u) (the signed distance to the body),
  /// computed on the support representation for every kind.
  SupportGap support_gap(const Vec3& x) const;

  /// max over v in span(e1, e2), |v| = 1, of <x,v> - h(v): signed distance
  /// of the projection of x to the projection of the body along e1 x e2.
  SupportGap shadow_gap(const Vec3& x, const Vec3& e1, const Vec3& e2) const;

  /// Largest t with p + t d in the body; nullopt when the line misses it.
  std::optional<double> exit_distance(const Vec3& p, const Vec3& d) const;

  /// Exit distance inside the projection along span(d, side)^perp: the
  /// largest t such that p + t d projects into the shadow. `side` is the
  /// in-plane unit vector orthogonal to d.
  std::optional<double> shadow_exit_distance(const Vec3& p, const Vec3& d, const Vec3& side) const;

  Body homothet(double ratio, const Vec3& center) const;
  Body translated(const Vec3& t) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

double support(const Body& b, const Direction& u);
Vec3 boundary_point(const Body& b, const Direction& u);
double membership(const Body& b, const Vec3& x);
bool contains_body(const Body& outer, const Body& inner, double margin);
ValidationReport validate(const Body& b);
Ellipsoid apply_affine(const Ellipsoid& e, const Mat3& m, const Vec3& t);

/// Default direction grid for a body: sphere for 3D, circle for planar.
DirectionGrid body_grid(const Body& b, int m);

/// Boundary points at the outer normals of body_grid(b, m).
std::vector<Vec3> sample_boundary(const Body& b, int m);

}  // namespace equichord
