#include "equichord/chords.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace equichord {

namespace {

constexpr double kGrazingDepth = 1e-7;

// Depth of the line inside the body: the most negative membership along it
// for ellipsoids, the distance gap of the line's shadow for support bodies.
double line_gap(const Body& b, const Line& line) {
  const Vec3& d = line.dir.vec();
  if (const auto* e = std::get_if<Ellipsoid>(&b.rep())) {
    const Vec3 q = line.base - e->center;
    const double a = d.dot(e->shape * d);
    const double bb = d.dot(e->shape * q);
    const double c = q.dot(e->shape * q) - 1.0;
    return c - bb * bb / a;
  }
  if (b.dim() == 2) {
    const Vec3 n(-d.y(), d.x(), 0.0);
    return std::max(line.base.dot(n) - b.support(n), -line.base.dot(n) - b.support(-n));
  }
  const auto [e1, e2] = orthonormal_complement(d);
  return b.shadow_gap(line.base, e1, e2).value;
}

Vec3 closest_to_anchor(const Body& b, const Line& line) {
  return line.at((b.anchor() - line.base).dot(line.dir.vec()));
}

}  // namespace

double relative_spread(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  double lo = values.front(), hi = values.front(), sum = 0.0;
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
  }
  const double mean = sum / static_cast<double>(values.size());
  return mean != 0.0 ? (hi - lo) / std::abs(mean) : (hi > lo ? std::numeric_limits<double>::infinity() : 0.0);
}

ChordProfile summarize(std::vector<double> lengths, std::vector<double> parameters) {
  ChordProfile p;
  p.lengths = std::move(lengths);
  p.parameters = std::move(parameters);
  if (p.lengths.empty()) return p;
  p.min = p.max = p.lengths.front();
  double sum = 0.0;
  for (double v : p.lengths) {
    p.min = std::min(p.min, v);
    p.max = std::max(p.max, v);
    sum += v;
  }
  p.mean = sum / static_cast<double>(p.lengths.size());
  p.relative_spread = relative_spread(p.lengths);
  return p;
}

std::optional<Chord> line_body_intersection(const Body& b, const Line& line) {
  const double gap = line_gap(b, line);
  if (gap > 0.0) return std::nullopt;
  const Vec3& d = line.dir.vec();
  if (gap >= -kGrazingDepth) {
    Vec3 touch;
    if (const auto* e = std::get_if<Ellipsoid>(&b.rep())) {
      const Vec3 q = line.base - e->center;
      touch = line.at(-d.dot(e->shape * q) / d.dot(e->shape * d));
    } else {
      touch = closest_to_anchor(b, line);
      if (auto t = b.exit_distance(touch, d)) touch += *t * d;
    }
    Chord c{touch, touch, 0.0, true};
    return c;
  }
  if (const auto* e = std::get_if<Ellipsoid>(&b.rep())) {
    const Vec3 q = line.base - e->center;
    const double a = d.dot(e->shape * d);
    const double bb = d.dot(e->shape * q);
    const double c = q.dot(e->shape * q) - 1.0;
    const double root = std::sqrt(std::max(0.0, bb * bb - a * c));
    // Numerically stable pair of roots.
    const double qq = -(bb + std::copysign(root, bb));
    double t1 = qq / a, t2 = qq != 0.0 ? c / qq : -t1;
    if (t1 > t2) std::swap(t1, t2);
    return Chord::between(line.at(t1), line.at(t2));
  }
  // Any inner point of the line works as the start; the exit solver takes
  // care of the rest from both sides.
  const Vec3 start = closest_to_anchor(b, line);
  const auto fwd = b.exit_distance(start, d);
  const auto bwd = b.exit_distance(start, -d);
  if (!fwd || !bwd) return std::nullopt;
  return Chord::between(start - *bwd * d, start + *fwd * d);
}

std::optional<Chord> line_body_intersection_bisection(const Body& b, const Line& line) {
  const Vec3& d = line.dir.vec();
  const double reach = 2.0 * b.radius();
  const double t_mid = (b.anchor() - line.base).dot(d);
  auto f = [&](double t) { return b.membership(line.at(t)); };

  // Golden-section search for the deepest point along the line.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = t_mid - reach, hi = t_mid + reach;
  double c = hi - invphi * (hi - lo), e = lo + invphi * (hi - lo);
  double fc = f(c), fe = f(e);
  for (int it = 0; it < 200 && hi - lo > 1e-13 * reach; ++it) {
    if (fc < fe) {
      hi = e;
      e = c;
      fe = fc;
      c = hi - invphi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = e;
      fc = fe;
      e = lo + invphi * (hi - lo);
      fe = f(e);
    }
  }
  const double t_in = 0.5 * (lo + hi);
  const double depth = f(t_in);
  if (depth > 0.0) return std::nullopt;
  if (depth >= -kGrazingDepth) {
    Chord g{line.at(t_in), line.at(t_in), 0.0, true};
    return g;
  }
  const double tol = 1e-10 * reach;
  auto crossing = [&](double inside, double outside) {
    while (std::abs(outside - inside) > tol) {
      const double mid = 0.5 * (inside + outside);
      (f(mid) <= 0.0 ? inside : outside) = mid;
    }
    return 0.5 * (inside + outside);
  };
  const double ta = crossing(t_in, t_mid - 2.0 * reach);
  const double tb = crossing(t_in, t_mid + 2.0 * reach);
  return Chord::between(line.at(ta), line.at(tb));
}

TangentFamily tangent_lines_parallel(const Body& L, const Direction& u, int m) {
  require(m >= 1, "tangent_lines_parallel: m must be >= 1");
  require(L.dim() == 3, "tangent_lines_parallel: body must be 3D");
  const auto [e1, e2] = orthonormal_complement(u.vec());
  TangentFamily fam;
  fam.parameter = "normal angle in u-perp";
  for (int j = 0; j < m; ++j) {
    const double phi = 2.0 * kPi * j / m;
    const Vec3 v = std::cos(phi) * e1 + std::sin(phi) * e2;
    const Vec3 touch = L.boundary_point(v);
    fam.lines.push_back(Line{touch, u});
    fam.parameters.push_back(phi);
    fam.touch_points.push_back(touch);
  }
  return fam;
}

// Dual construction: the tangent planes of the cone are the planes
// {<y,n> = h(n)} that pass through x. Starting from the normal n0 of the
// nearest boundary point (where h(n0) < <x,n0>), each azimuth psi tilts n
// toward b(psi) in n0^perp, where h(b) > <x,b>; bisection finds the tilt at
// which the plane passes through x. The ruling joins x to the touch point.
std::vector<Vec3> support_cone_normals(const Body& L, const Vec3& x, int m) {
  require(m >= 1, "support cone: m must be >= 1");
  const SupportGap gap = L.support_gap(x);
  if (!(gap.value > 0.0)) fail(ErrorKind::InvalidArgument, "support cone: apex must lie outside the body");
  const Vec3 n0 = gap.direction;
  Vec3 a1, a2;
  if (L.dim() == 2) {
    a1 = Vec3(-n0.y(), n0.x(), 0.0);
    a2 = Vec3::Zero();
  } else {
    std::tie(a1, a2) = orthonormal_complement(n0);
  }
  std::vector<Vec3> normals;
  normals.reserve(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const double psi = L.dim() == 2 ? kPi * (j % 2) : 2.0 * kPi * j / m;
    const Vec3 b = std::cos(psi) * a1 + std::sin(psi) * a2;
    auto normal = [&](double beta) { return Vec3(std::cos(beta) * n0 + std::sin(beta) * b); };
    double lo = 0.0, hi = kPi / 2.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      const Vec3 n = normal(mid);
      (L.support(n) < x.dot(n) ? lo : hi) = mid;
    }
    normals.push_back(normal(0.5 * (lo + hi)));
  }
  return normals;
}

TangentFamily tangent_lines_through_point(const Body& L, const Vec3& x, int m) {
  const auto normals = support_cone_normals(L, x, m);
  TangentFamily fam;
  fam.parameter = "support cone azimuth";
  for (int j = 0; j < m; ++j) {
    const Vec3 touch = L.boundary_point(normals[static_cast<std::size_t>(j)]);
    fam.lines.push_back(Line{x, Direction(touch - x)});
    fam.parameters.push_back(L.dim() == 2 ? kPi * (j % 2) : 2.0 * kPi * j / m);
    fam.touch_points.push_back(touch);
  }
  return fam;
}

TangentFamily tangent_lines_planar(const Body& L, int m) {
  require(m >= 1, "tangent_lines_planar: m must be >= 1");
  require(L.dim() == 2, "tangent_lines_planar: body must be planar");
  TangentFamily fam;
  fam.parameter = "outer normal angle";
  for (int j = 0; j < m; ++j) {
    const double theta = 2.0 * kPi * j / m;
    const Vec3 v(std::cos(theta), std::sin(theta), 0.0);
    const Vec3 touch = L.boundary_point(v);
    fam.lines.push_back(Line{touch, Direction(-v.y(), v.x(), 0.0)});
    fam.parameters.push_back(theta);
    fam.touch_points.push_back(touch);
  }
  return fam;
}

ChordProfile chord_profile(const Body& K, const TangentFamily& family, Exec exec) {
  const double diameter = 2.0 * K.radius();
  const auto chords = map_indices<std::optional<Chord>>(
      family.lines.size(), [&](std::size_t i) { return line_body_intersection(K, family.lines[i]); }, exec);
  std::vector<double> lengths, params;
  std::size_t grazing = 0;
  for (std::size_t i = 0; i < chords.size(); ++i) {
    if (!chords[i])
      fail(ErrorKind::InconsistentContainment, "a tangent line of the inner body misses the outer body");
    if (chords[i]->grazing || chords[i]->length < 1e-6 * diameter) {
      ++grazing;
      continue;
    }
    lengths.push_back(chords[i]->length);
    params.push_back(family.parameters[i]);
  }
  ChordProfile p = summarize(std::move(lengths), std::move(params));
  p.grazing = grazing;
  return p;
}

ChordProfile parallel_chord_profile(const Body& K, const Body& L, const Direction& u, int m, Exec exec) {
  return chord_profile(K, tangent_lines_parallel(L, u, m), exec);
}

ChordProfile concurrent_chord_profile(const Body& K, const Body& L, const Vec3& x, int m, Exec exec) {
  require(K.membership(x) > 0.0, "concurrent_chord_profile: apex must lie strictly outside K");
  return chord_profile(K, tangent_lines_through_point(L, x, m), exec);
}

ChordProfile planar_chord_profile(const Body& K, const Body& L, int m, Exec exec) {
  return chord_profile(K, tangent_lines_planar(L, m), exec);
}

}  // namespace equichord
