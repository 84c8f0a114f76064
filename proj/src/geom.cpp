#include "equichord/geom.hpp"

#include <cmath>
#include <string>

namespace equichord {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::DegenerateFit: return "degenerate-fit";
    case ErrorKind::UnsupportedBody: return "unsupported-body";
    case ErrorKind::EmptySection: return "empty-section";
    case ErrorKind::InconsistentContainment: return "inconsistent-containment";
    case ErrorKind::Parse: return "parse-error";
  }
  return "unknown";
}

Direction::Direction(const Vec3& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) fail(ErrorKind::InvalidArgument, "direction must be a finite nonzero vector");
  v_ = v / n;
}

Direction Direction::planar(double theta) {
  return Direction(Vec3(std::cos(theta), std::sin(theta), 0.0));
}

double Line::distance_to(const Vec3& x) const {
  const Vec3 r = x - base;
  return (r - r.dot(dir.vec()) * dir.vec()).norm();
}

Plane Plane::through(const Vec3& point, const Direction& normal) {
  return Plane{normal, point.dot(normal.vec())};
}

Chord Chord::between(const Vec3& a, const Vec3& b) {
  return Chord{a, b, (b - a).norm(), false};
}

DirectionGrid sphere_grid(int m) {
  require(m >= 1, "sphere_grid: count must be >= 1");
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  DirectionGrid grid;
  grid.kind = GridKind::FibonacciSphere;
  grid.samples.reserve(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const double z = 1.0 - (2.0 * j + 1.0) / m;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * j;
    grid.samples.emplace_back(Vec3(r * std::cos(phi), r * std::sin(phi), z));
  }
  return grid;
}

DirectionGrid circle_grid(int m) {
  require(m >= 1, "circle_grid: count must be >= 1");
  DirectionGrid grid;
  grid.kind = GridKind::UniformCircle;
  grid.samples.reserve(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) grid.samples.push_back(Direction::planar(2.0 * kPi * j / m));
  return grid;
}

std::pair<Vec3, Vec3> orthonormal_complement(const Vec3& u) {
  int axis = 0;
  for (int i = 1; i < 3; ++i)
    if (std::abs(u[i]) < std::abs(u[axis])) axis = i;
  Vec3 a = Vec3::Zero();
  a[axis] = 1.0;
  Vec3 e1 = (a - a.dot(u) * u).normalized();
  Vec3 e2 = u.cross(e1);
  return {e1, e2};
}

Mat3 rotation_between(const Vec3& from, const Vec3& to) {
  return Eigen::Quaterniond::FromTwoVectors(from, to).toRotationMatrix();
}

namespace {

// Sign convention for fitted normals: first clearly nonzero component positive.
Vec3 canonical_sign(Vec3 n) {
  for (int i = 0; i < 3; ++i) {
    if (std::abs(n[i]) > 1e-12) {
      if (n[i] < 0) n = -n;
      break;
    }
  }
  return n;
}

}  // namespace

PlaneFit fit_plane(std::span<const Vec3> points) {
  require(points.size() >= 3, "fit_plane: need at least 3 points");
  Vec3 centroid = Vec3::Zero();
  for (const auto& p : points) centroid += p;
  centroid /= static_cast<double>(points.size());

  Mat3 scatter = Mat3::Zero();
  for (const auto& p : points) {
    const Vec3 d = p - centroid;
    scatter += d * d.transpose();
  }
  scatter /= static_cast<double>(points.size());

  Eigen::SelfAdjointEigenSolver<Mat3> eig(scatter);
  const Vec3 lambda = eig.eigenvalues();
  const double scale = std::max(lambda[2], 0.0);
  if (scale <= 1e-300) fail(ErrorKind::DegenerateFit, "fit_plane: all points coincide");
  if (lambda[1] <= 1e-14 * scale + 1e-300) {
    throw DegenerateFit("fit_plane: points are collinear",
                        Line{centroid, Direction(eig.eigenvectors().col(2))});
  }

  const Vec3 normal = canonical_sign(eig.eigenvectors().col(0));
  double ss = 0.0;
  for (const auto& p : points) {
    const double d = (p - centroid).dot(normal);
    ss += d * d;
  }
  PlaneFit fit;
  fit.plane = Plane::through(centroid, Direction(normal));
  fit.centroid = centroid;
  fit.rms_residual = std::sqrt(ss / static_cast<double>(points.size()));
  return fit;
}

CircleFit fit_circle(std::span<const Vec3> points, const Plane& plane) {
  require(points.size() >= 3, "fit_circle: need at least 3 points");
  Vec3 centroid = Vec3::Zero();
  double extent = 0.0;
  for (const auto& p : points) {
    centroid += p;
    extent = std::max(extent, p.norm());
  }
  centroid /= static_cast<double>(points.size());
  for (const auto& p : points) {
    if (std::abs(plane.signed_distance(p)) > 1e-9 * (1.0 + extent))
      fail(ErrorKind::InvalidArgument, "fit_circle: points are not on the plane");
  }

  const auto [e1, e2] = orthonormal_complement(plane.normal.vec());
  const Vec3 origin = plane.project(centroid);
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd rhs(n);
  std::vector<Vec2> local(points.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec3 d = points[static_cast<std::size_t>(i)] - origin;
    const Vec2 q(d.dot(e1), d.dot(e2));
    local[static_cast<std::size_t>(i)] = q;
    design(i, 0) = q.x();
    design(i, 1) = q.y();
    design(i, 2) = 1.0;
    rhs(i) = -q.squaredNorm();
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto sv = svd.singularValues();
  if (sv(2) <= 1e-12 * sv(0)) throw DegenerateFit("fit_circle: points are collinear");
  const Eigen::Vector3d sol = svd.solve(rhs);

  const Vec2 c2(-0.5 * sol(0), -0.5 * sol(1));
  const double r2 = c2.squaredNorm() - sol(2);
  if (!(r2 > 0.0)) throw DegenerateFit("fit_circle: no real circle fits the points");

  CircleFit fit;
  fit.radius = std::sqrt(r2);
  fit.center = origin + c2.x() * e1 + c2.y() * e2;
  double ss = 0.0;
  for (const auto& q : local) {
    const double d = (q - c2).norm() - fit.radius;
    ss += d * d;
  }
  fit.rms_residual = std::sqrt(ss / static_cast<double>(local.size()));
  return fit;
}

}  // namespace equichord
