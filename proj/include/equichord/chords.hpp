#pragma once

#include <optional>
#include <string>
#include <vector>

#include "equichord/body.hpp"
#include "equichord/parallel.hpp"

namespace equichord {

/// Lines tangent to a body, ordered by the family parameter.
struct TangentFamily {
  std::vector<Line> lines;
  std::vector<double> parameters;
  std::string parameter;  // what `parameters` measures
  std::vector<Vec3> touch_points;
};

struct ChordProfile {
  std::vector<double> lengths;     // non-grazing chords only
  std::vector<double> parameters;  // family parameter of each kept chord
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double relative_spread = 0.0;
  std::size_t grazing = 0;
};

/// Summary statistics in index order. Empty input gives all zeros.
ChordProfile summarize(std::vector<double> lengths, std::vector<double> parameters = {});

/// (max - min) / mean of a sample.
double relative_spread(const std::vector<double>& values);

/// Chord of `b` cut by `line`, or nullopt when the line misses. A line that
/// only skims the body (depth under 1e-7) yields a zero-length chord with
/// the grazing flag set.
std::optional<Chord> line_body_intersection(const Body& b, const Line& line);

/// Same result computed from membership alone: golden-section search for
/// the deepest line point, then outward bisection of the boundary crossings.
std::optional<Chord> line_body_intersection_bisection(const Body& b, const Line& line);

/// Lines parallel to u touching a 3D body at the boundary points whose outer
/// normals v(phi) sweep u^perp.
TangentFamily tangent_lines_parallel(const Body& L, const Direction& u, int m);

/// Outer normals of the tangent planes of the support cone of L with apex x,
/// one per azimuth psi_j = 2 pi j / m around the nearest-point normal.
std::vector<Vec3> support_cone_normals(const Body& L, const Vec3& x, int m);

/// Rulings of the support cone of L with apex x.
TangentFamily tangent_lines_through_point(const Body& L, const Vec3& x, int m);

/// Tangent lines of a planar body indexed by outer normal angle theta_j.
TangentFamily tangent_lines_planar(const Body& L, int m);

/// Chord lengths of K along each line of a tangent family.
ChordProfile chord_profile(const Body& K, const TangentFamily& family, Exec exec = Exec::Parallel);

ChordProfile parallel_chord_profile(const Body& K, const Body& L, const Direction& u, int m,
                                    Exec exec = Exec::Parallel);
ChordProfile concurrent_chord_profile(const Body& K, const Body& L, const Vec3& x, int m,
                                      Exec exec = Exec::Parallel);
ChordProfile planar_chord_profile(const Body& K, const Body& L, int m, Exec exec = Exec::Parallel);

}  // namespace equichord
