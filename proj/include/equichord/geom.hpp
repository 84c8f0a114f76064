#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "equichord/errors.hpp"

namespace equichord {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;

/// Unit vector. Construction normalizes; a zero vector is rejected.
class Direction {
 public:
  Direction() : v_(Vec3::UnitX()) {}
  explicit Direction(const Vec3& v);
  Direction(double x, double y, double z) : Direction(Vec3(x, y, z)) {}

  /// Planar direction at angle `theta` in the xy-plane.
  static Direction planar(double theta);

  const Vec3& vec() const { return v_; }
  operator const Vec3&() const { return v_; }
  double operator[](int i) const { return v_[i]; }
  Direction operator-() const { return Direction(-v_); }

 private:
  Vec3 v_;
};

struct Line {
  Vec3 base;
  Direction dir;

  Vec3 at(double t) const { return base + t * dir.vec(); }
  double distance_to(const Vec3& x) const;
};

/// {x : <x, normal> = offset}
struct Plane {
  Direction normal;
  double offset = 0.0;

  double signed_distance(const Vec3& x) const { return x.dot(normal.vec()) - offset; }
  Vec3 project(const Vec3& x) const { return x - signed_distance(x) * normal.vec(); }
  static Plane through(const Vec3& point, const Direction& normal);
};

struct Chord {
  Vec3 a = Vec3::Zero();
  Vec3 b = Vec3::Zero();
  double length = 0.0;
  bool grazing = false;

  static Chord between(const Vec3& a, const Vec3& b);
};

enum class GridKind { FibonacciSphere, UniformCircle };

struct DirectionGrid {
  std::vector<Direction> samples;
  GridKind kind = GridKind::FibonacciSphere;

  std::size_t size() const { return samples.size(); }
  const Direction& operator[](std::size_t i) const { return samples[i]; }
  auto begin() const { return samples.begin(); }
  auto end() const { return samples.end(); }
};

/// Fibonacci-lattice directions on S^2. Deterministic for a given count.
DirectionGrid sphere_grid(int m);

/// theta_j = 2 pi j / m in the xy-plane.
DirectionGrid circle_grid(int m);

/// Orthonormal (e1, e2) completing `u` to a right-handed frame (e1 x e2 = u).
/// The choice depends on `u` only.
std::pair<Vec3, Vec3> orthonormal_complement(const Vec3& u);

/// Rotation matrix taking unit vector `from` to unit vector `to`.
Mat3 rotation_between(const Vec3& from, const Vec3& to);

struct PlaneFit {
  Plane plane;
  Vec3 centroid = Vec3::Zero();
  double rms_residual = 0.0;
};

struct CircleFit {
  Vec3 center = Vec3::Zero();
  double radius = 0.0;
  double rms_residual = 0.0;
};

/// Raised when a fit's design is rank deficient. For plane fits the best
/// line through the data is attached.
class DegenerateFit : public GeometryError {
 public:
  DegenerateFit(const std::string& what, std::optional<Line> best_line = std::nullopt)
      : GeometryError(ErrorKind::DegenerateFit, what), best_line_(std::move(best_line)) {}
  const std::optional<Line>& best_line() const { return best_line_; }

 private:
  std::optional<Line> best_line_;
};

PlaneFit fit_plane(std::span<const Vec3> points);

/// Kasa circle fit of coplanar points, in the coordinates of `plane`.
CircleFit fit_circle(std::span<const Vec3> points, const Plane& plane);

}  // namespace equichord
