#pragma once

#include <span>
#include <vector>

#include "equichord/body.hpp"

namespace equichord {

/// Least-squares quadric (x - c)^T A (x - c) = 1. `raw` is A itself, `shape`
/// is A scaled to trace = dim. For dim == 2 only the x, y coordinates are
/// used and the z row/column of both matrices is the identity's.
struct QuadricFit {
  Vec3 center = Vec3::Zero();
  Mat3 shape = Mat3::Identity();
  Mat3 raw = Mat3::Identity();
  double rms_residual = 0.0;  // rms of (x-c)^T A (x-c) - 1 over the samples
  int dim = 3;
};

QuadricFit fit_quadric(std::span<const Vec3> samples, int dim = 3);

/// Boundary samples of b at `m` grid normals, fitted.
QuadricFit fit_body(const Body& b, int m = 256);

struct Homothety {
  double ratio = 1.0;     // linear scale taking the first quadric to the second
  double residual = 0.0;  // |c1 - c2| + relative mismatch of s A2 against A1
};

Homothety homothety_test(const QuadricFit& f1, const QuadricFit& f2);

/// ||A - (tr A / n) I|| / (tr A / n): zero exactly for spheres and circles.
double isotropy_residual(const QuadricFit& f);

/// Radius of the ball with the same mean curvature scale: sqrt(n / tr A).
double ball_radius(const QuadricFit& f);

}  // namespace equichord
