#include "equichord/shadow.hpp"

#include <algorithm>
#include <cmath>

#include "equichord/chords.hpp"
#include "equichord/planar.hpp"

namespace equichord {

ShadowCurve shadow_boundary(const Body& K, const Direction& u, int m, Exec exec) {
  require(m >= 3, "shadow_boundary: m must be >= 3");
  if (!K.strictly_convex()) fail(ErrorKind::UnsupportedBody, "shadow_boundary requires a strictly convex body");
  const auto [e1, e2] = orthonormal_complement(u.vec());
  ShadowCurve out;
  out.direction = u.vec();
  out.phi.resize(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) out.phi[static_cast<std::size_t>(j)] = 2.0 * kPi * j / m;
  out.points = map_indices<Vec3>(
      out.phi.size(),
      [&](std::size_t j) { return K.boundary_point(std::cos(out.phi[j]) * e1 + std::sin(out.phi[j]) * e2); }, exec);
  const PlaneFit fit = fit_plane(out.points);
  out.plane_fit = fit.plane;
  out.rms_residual = fit.rms_residual;
  out.normal_alignment = std::abs(fit.plane.normal.vec().dot(u.vec()));
  return out;
}

AxisReport axis_of_revolution_test(const Body& K, const Line& axis, int m_planes, int m_pts, Exec exec) {
  require(m_planes >= 1 && m_pts >= 3, "axis_of_revolution_test: need at least one plane and three points");
  const auto chord = line_body_intersection(K, axis);
  if (!chord || chord->grazing) fail(ErrorKind::EmptySection, "axis does not meet the interior of the body");
  const Vec3& d = axis.dir.vec();
  AxisReport rep;
  std::vector<std::pair<double, double>> fits(static_cast<std::size_t>(m_planes));
  std::vector<double> radii(static_cast<std::size_t>(m_planes));
  for_each_index(
      static_cast<std::size_t>(m_planes),
      [&](std::size_t k) {
        const double frac = (static_cast<double>(k) + 1.0) / (m_planes + 1.0);
        const Vec3 x = chord->a + frac * (chord->b - chord->a);
        const Plane plane = Plane::through(x, axis.dir);
        const PlanarBody s = section(K, plane, m_pts, x, Exec::Serial);
        std::vector<Vec3> pts;
        for (std::size_t j = 0; j < s.size(); ++j) pts.push_back(s.frame.to_world(s.radial_point(j)));
        const CircleFit c = fit_circle(pts, plane);
        fits[k] = {c.rms_residual, axis.distance_to(c.center)};
        radii[k] = c.radius;
      },
      exec);
  for (int k = 0; k < m_planes; ++k) {
    rep.circle_residual = std::max(rep.circle_residual, fits[static_cast<std::size_t>(k)].first);
    rep.center_residual = std::max(rep.center_residual, fits[static_cast<std::size_t>(k)].second);
    rep.offsets.push_back((chord->a + (k + 1.0) / (m_planes + 1.0) * (chord->b - chord->a) - axis.base).dot(d));
  }
  rep.radii = std::move(radii);
  return rep;
}

CheckReport lemma2_check(const Body& K, const Direction& v, int m_w, int m_shadow, int axis_planes, int axis_points,
                         double hypothesis_tol, double conclusion_tol, Exec exec) {
  require(m_w >= 1, "lemma2_check: m_w must be >= 1");
  require(K.dim() == 3, "lemma2_check: body must be 3D");
  CheckReport r;
  r.check_id = "lemma2";
  r.hypothesis_tol = hypothesis_tol;
  r.conclusion_tol = conclusion_tol;
  const double diameter = 2.0 * K.radius();
  const auto [e1, e2] = orthonormal_complement(v.vec());
  std::vector<double> hyp(static_cast<std::size_t>(m_w));
  double worst_rms = 0.0, worst_alignment = 0.0;
  for (int k = 0; k < m_w; ++k) {
    const double phi = kPi * k / m_w;  // w and -w share a shadow boundary
    const Direction w(std::cos(phi) * e1 + std::sin(phi) * e2);
    const ShadowCurve sc = shadow_boundary(K, w, m_shadow, exec);
    worst_rms = std::max(worst_rms, sc.rms_residual / diameter);
    worst_alignment = std::max(worst_alignment, 1.0 - sc.normal_alignment);
  }
  r.hypothesis_residual = std::max(worst_rms, worst_alignment);

  const Vec3 a = K.boundary_point(-v.vec());
  const Vec3 b = K.boundary_point(v.vec());
  const Line axis{a, Direction(b - a)};
  const AxisReport ax = axis_of_revolution_test(K, axis, axis_planes, axis_points, exec);
  r.conclusion_residual = std::max(ax.circle_residual, ax.center_residual) / diameter;

  r.metrics["planarity_rms"] = worst_rms;
  r.metrics["alignment_defect"] = worst_alignment;
  r.metrics["axis_circle_residual"] = ax.circle_residual;
  r.metrics["axis_center_residual"] = ax.center_residual;
  r.metrics["axis_angle_to_v"] = std::acos(std::clamp(std::abs(axis.dir.vec().dot(v.vec())), 0.0, 1.0));
  r.samples["w_directions"] = m_w;
  r.samples["shadow_points"] = m_shadow;
  r.samples["axis_planes"] = axis_planes;
  r.samples["axis_points"] = axis_points;
  r.decide();
  return r;
}

}  // namespace equichord
