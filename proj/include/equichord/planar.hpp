#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "equichord/body.hpp"
#include "equichord/chords.hpp"

namespace equichord {

struct Frame {
  Vec3 origin = Vec3::Zero();
  Vec3 e1 = Vec3::UnitX();
  Vec3 e2 = Vec3::UnitY();

  Vec3 normal() const { return e1.cross(e2); }
  Vec3 to_world(const Vec2& p) const { return origin + p.x() * e1 + p.y() * e2; }
  Vec3 direction(const Vec2& d) const { return d.x() * e1 + d.y() * e2; }
  Vec2 to_local(const Vec3& x) const { return Vec2((x - origin).dot(e1), (x - origin).dot(e2)); }
  Vec2 local_direction(const Vec3& d) const { return Vec2(d.dot(e1), d.dot(e2)); }
};

enum class Provenance { Section, Projection, Native };
const char* to_string(Provenance p);

/// Exact queries on the planar set behind a PlanarBody, in frame-local
/// coordinates (origin at the frame origin).
class PlanarOracle {
 public:
  virtual ~PlanarOracle() = default;
  /// Largest t with p + t d in the set; nullopt when the line misses.
  virtual std::optional<double> exit_distance(const Vec2& p, const Vec2& d) const = 0;
  /// Signed: negative inside, positive outside.
  virtual double membership(const Vec2& p) const = 0;
  virtual double support(const Vec2& v) const = 0;
  /// Boundary point with outer normal v (strictly convex sets only).
  virtual Vec2 boundary_point(const Vec2& v) const = 0;
};

struct PlanarBody {
  Frame frame;
  std::vector<double> theta;    // theta_j = 2 pi j / m
  std::vector<double> radial;   // rho(theta_j) from the frame origin
  std::vector<double> support;  // h(theta_j) relative to the frame origin
  Provenance provenance = Provenance::Native;
  bool strictly_convex = true;
  std::shared_ptr<const PlanarOracle> oracle;

  std::size_t size() const { return theta.size(); }
  Vec2 radial_point(std::size_t j) const;
  /// Violated invariants (positive radii, convex radial polygon, support
  /// dominating the radial samples); empty when all hold.
  std::vector<std::string> invariant_violations() const;
};

/// Section by a plane. `anchor_hint`, when interior to the section, is used
/// as the frame origin instead of the deepest point.
PlanarBody section(const Body& K, const Plane& P, int m, std::optional<Vec3> anchor_hint = std::nullopt,
                   Exec exec = Exec::Parallel);

/// Orthogonal projection along u onto the plane through K's anchor.
PlanarBody projection(const Body& K, const Direction& u, int m, Exec exec = Exec::Parallel);

/// A planar body as a PlanarBody in the xy-plane.
PlanarBody native_planar(const Body& B, int m, Exec exec = Exec::Parallel);

/// w(theta_j) = h(theta_j) + h(theta_j + pi), j < m/2.
ChordProfile width_profile(const PlanarBody& P);

/// d(theta) = rho_p(theta) + rho_p(theta + pi) over m angles in [0, pi).
ChordProfile equichordal_test(const PlanarBody& P, const Vec2& p, int m);

/// Chords of K along the tangent lines of L at outer normal angles
/// 2 pi j / m. Both bodies must live in parallel planes (same e1, e2); L is
/// read through K's frame.
ChordProfile planar_tangent_chords(const PlanarBody& K, const PlanarBody& L, int m);

/// Chord between the boundary points with outer normals v and -v (local).
Chord affine_diameter(const PlanarBody& P, const Vec2& v);

struct BinormalResult {
  std::vector<Chord> chords;  // world coordinates
  std::vector<double> angles;
  /// Every sampled direction was a binormal: discs and bodies of constant
  /// width. The chords are not enumerated in that case.
  bool degenerate_family = false;
  double family_min_length = 0.0;
  double family_max_length = 0.0;
};

BinormalResult binormal_search(const PlanarBody& P);

/// Planes supporting L: normals sweeping u^perp, offsets h_L.
std::vector<Plane> supporting_planes_parallel(const Body& L, const Direction& u, int m);
/// Tangent planes of the support cone of L with apex x.
std::vector<Plane> supporting_planes_through(const Body& L, const Vec3& x, int m);

}  // namespace equichord
