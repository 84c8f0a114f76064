#pragma once

#include <vector>

#include "equichord/body.hpp"
#include "equichord/parallel.hpp"
#include "equichord/report.hpp"

namespace equichord {

/// Boundary points of K whose outer normals are orthogonal to u, with a
/// plane fitted through them.
struct ShadowCurve {
  Vec3 direction = Vec3::UnitZ();
  std::vector<double> phi;
  std::vector<Vec3> points;
  Plane plane_fit;
  double rms_residual = 0.0;
  double normal_alignment = 0.0;  // |<fit normal, u>|
};

ShadowCurve shadow_boundary(const Body& K, const Direction& u, int m, Exec exec = Exec::Parallel);

struct AxisReport {
  double circle_residual = 0.0;  // worst rms of the circle fits
  double center_residual = 0.0;  // worst distance of a fitted center from the axis
  std::vector<double> radii;
  std::vector<double> offsets;   // plane positions along the axis
};

/// Sections orthogonal to `axis` at m_planes interior positions of the chord
/// the axis cuts from K, each fitted with a circle.
AxisReport axis_of_revolution_test(const Body& K, const Line& axis, int m_planes, int m_pts,
                                   Exec exec = Exec::Parallel);

/// Planar shadow boundaries orthogonal to every w in v^perp against the
/// axis test along the chord joining the boundary points with normals -v, v.
/// Residuals are scaled by the body's diameter bound.
CheckReport lemma2_check(const Body& K, const Direction& v, int m_w, int m_shadow = 128, int axis_planes = 16,
                         int axis_points = 64, double hypothesis_tol = 1e-6, double conclusion_tol = 1e-6,
                         Exec exec = Exec::Parallel);

}  // namespace equichord
