#include "equichord/planar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace equichord {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::Section: return "section";
    case Provenance::Projection: return "projection";
    case Provenance::Native: return "native-2d";
  }
  return "unknown";
}

namespace {

Vec2 perp(const Vec2& d) { return Vec2(-d.y(), d.x()); }

class NativeOracle final : public PlanarOracle {
 public:
  NativeOracle(Body b, Frame f) : body_(std::move(b)), frame_(std::move(f)) {}

  std::optional<double> exit_distance(const Vec2& p, const Vec2& d) const override {
    return body_.exit_distance(frame_.to_world(p), frame_.direction(d));
  }
  double membership(const Vec2& p) const override { return body_.membership(frame_.to_world(p)); }
  double support(const Vec2& v) const override {
    const Vec3 w = frame_.direction(v);
    return body_.support(w) - frame_.origin.dot(w);
  }
  Vec2 boundary_point(const Vec2& v) const override {
    return frame_.to_local(body_.boundary_point(frame_.direction(v)));
  }

 private:
  Body body_;
  Frame frame_;
};

class ProjectionOracle final : public PlanarOracle {
 public:
  ProjectionOracle(Body b, Frame f) : body_(std::move(b)), frame_(std::move(f)) {}

  std::optional<double> exit_distance(const Vec2& p, const Vec2& d) const override {
    const Vec2 dn = d.normalized();
    return body_.shadow_exit_distance(frame_.to_world(p), frame_.direction(dn), frame_.direction(perp(dn)));
  }
  double membership(const Vec2& p) const override {
    return body_.shadow_gap(frame_.to_world(p), frame_.e1, frame_.e2).value;
  }
  double support(const Vec2& v) const override {
    const Vec3 w = frame_.direction(v);
    return body_.support(w) - frame_.origin.dot(w);
  }
  Vec2 boundary_point(const Vec2& v) const override {
    return frame_.to_local(body_.boundary_point(frame_.direction(v)));
  }

 private:
  Body body_;
  Frame frame_;
};

// Support of K cut by {<x,n> = c}: h(v) = min over lambda of
// H(v + lambda n) - lambda c, a convex one-dimensional problem. The boundary
// point with normal v is the gradient of H at the minimizer.
class SectionOracle final : public PlanarOracle {
 public:
  SectionOracle(Body b, Frame f) : body_(std::move(b)), frame_(std::move(f)) {
    n_ = frame_.normal();
    c_ = frame_.origin.dot(n_);
  }

  std::optional<double> exit_distance(const Vec2& p, const Vec2& d) const override {
    return body_.exit_distance(frame_.to_world(p), frame_.direction(d));
  }
  double membership(const Vec2& p) const override { return body_.membership(frame_.to_world(p)); }
  double support(const Vec2& v) const override {
    const Vec3 w = frame_.direction(v);
    return solve(w).value - frame_.origin.dot(w);
  }
  Vec2 boundary_point(const Vec2& v) const override {
    return frame_.to_local(solve(frame_.direction(v)).gradient);
  }

 private:
  SupportJet solve(const Vec3& w) const {
    double lambda = 0.0;
    auto g = [&](double l, SupportJet& j) {
      j = body_.support_jet(w + l * n_);
      return j.value - l * c_;
    };
    SupportJet j;
    double gv = g(lambda, j);
    for (int it = 0; it < 100; ++it) {
      const double d1 = j.gradient.dot(n_) - c_;
      const double d2 = n_.dot(j.hessian * n_);
      if (std::abs(d1) <= 1e-15 * (1.0 + std::abs(c_))) break;
      double step = d2 > 0.0 ? -d1 / d2 : -d1;
      bool accepted = false;
      SupportJet jn;
      for (int ls = 0; ls < 60; ++ls) {
        const double cand = g(lambda + step, jn);
        if (cand <= gv + 1e-4 * step * d1) {
          lambda += step;
          gv = cand;
          j = jn;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
      if (std::abs(lambda) > 1e8) fail(ErrorKind::EmptySection, "section plane misses the body");
      if (std::abs(step) < 1e-16 * (1.0 + std::abs(lambda))) break;
    }
    j.value = gv;
    return j;
  }

  Body body_;
  Frame frame_;
  Vec3 n_;
  double c_ = 0.0;
};

Vec3 deepest_point(const Body& K, const Plane& P) {
  const Vec3 n = P.normal.vec();
  if (const auto* e = std::get_if<Ellipsoid>(&K.rep())) {
    const Mat3 inv = e->shape.inverse();
    const Vec3 an = inv * n;
    return e->center + an * (P.offset - e->center.dot(n)) / n.dot(an);
  }
  // Pattern search on membership within the plane.
  const auto [e1, e2] = orthonormal_complement(n);
  Vec3 x = P.project(K.anchor());
  double fx = K.membership(x);
  double step = 0.5 * K.radius();
  const Vec3 moves[4] = {e1, -e1, e2, -e2};
  for (int it = 0; it < 200 && step > 1e-9 * K.radius(); ++it) {
    bool moved = false;
    for (const auto& mv : moves) {
      const Vec3 y = x + step * mv;
      const double fy = K.membership(y);
      if (fy < fx) {
        x = y;
        fx = fy;
        moved = true;
        break;
      }
    }
    if (!moved) step *= 0.5;
  }
  return x;
}

void fill_samples(PlanarBody& P, int m, Exec exec) {
  require(m >= 3, "planar body needs at least 3 samples");
  P.theta.resize(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) P.theta[static_cast<std::size_t>(j)] = 2.0 * kPi * j / m;
  const auto& oracle = *P.oracle;
  const auto values = map_indices<std::pair<double, double>>(
      static_cast<std::size_t>(m),
      [&](std::size_t j) {
        const Vec2 d(std::cos(P.theta[j]), std::sin(P.theta[j]));
        const auto r = oracle.exit_distance(Vec2::Zero(), d);
        if (!r || !(*r > 0.0)) fail(ErrorKind::EmptySection, "planar anchor is not interior");
        return std::make_pair(*r, oracle.support(d));
      },
      exec);
  P.radial.resize(values.size());
  P.support.resize(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) {
    P.radial[j] = values[j].first;
    P.support[j] = values[j].second;
  }
}

}  // namespace

Vec2 PlanarBody::radial_point(std::size_t j) const {
  return radial[j] * Vec2(std::cos(theta[j]), std::sin(theta[j]));
}

std::vector<std::string> PlanarBody::invariant_violations() const {
  std::vector<std::string> out;
  const std::size_t m = size();
  for (std::size_t j = 0; j < m; ++j)
    if (!(radial[j] > 0.0)) {
      out.push_back("non-positive radial sample");
      break;
    }
  for (std::size_t j = 0; j < m; ++j) {
    const Vec2 a = radial_point(j), b = radial_point((j + 1) % m), c = radial_point((j + 2) % m);
    const Vec2 e = b - a, f = c - b;
    if (e.x() * f.y() - e.y() * f.x() < -1e-9) {
      out.push_back("radial polygon not convex");
      break;
    }
  }
  for (std::size_t j = 0; j < m; ++j) {
    const Vec2 d(std::cos(theta[j]), std::sin(theta[j]));
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < m; ++k) best = std::max(best, radial_point(k).dot(d));
    if (best > support[j] + 1e-9) {
      out.push_back("support below radial samples");
      break;
    }
  }
  return out;
}

PlanarBody section(const Body& K, const Plane& P, int m, std::optional<Vec3> anchor_hint, Exec exec) {
  require(K.dim() == 3, "section: body must be 3D");
  Vec3 origin;
  if (anchor_hint && K.membership(P.project(*anchor_hint)) < 0.0) {
    origin = P.project(*anchor_hint);
  } else {
    origin = deepest_point(K, P);
    if (!(K.membership(origin) < 0.0)) fail(ErrorKind::EmptySection, "section plane misses the interior of the body");
  }
  PlanarBody out;
  const auto [e1, e2] = orthonormal_complement(P.normal.vec());
  out.frame = Frame{origin, e1, e2};
  out.provenance = Provenance::Section;
  out.strictly_convex = K.strictly_convex();
  out.oracle = std::make_shared<SectionOracle>(K, out.frame);
  fill_samples(out, m, exec);
  return out;
}

PlanarBody projection(const Body& K, const Direction& u, int m, Exec exec) {
  require(K.dim() == 3, "projection: body must be 3D");
  PlanarBody out;
  const auto [e1, e2] = orthonormal_complement(u.vec());
  out.frame = Frame{K.anchor(), e1, e2};
  out.provenance = Provenance::Projection;
  out.strictly_convex = K.strictly_convex();
  out.oracle = std::make_shared<ProjectionOracle>(K, out.frame);
  fill_samples(out, m, exec);
  return out;
}

PlanarBody native_planar(const Body& B, int m, Exec exec) {
  require(B.dim() == 2, "native_planar: body must be planar");
  PlanarBody out;
  out.frame = Frame{B.anchor(), Vec3::UnitX(), Vec3::UnitY()};
  out.provenance = Provenance::Native;
  out.strictly_convex = B.strictly_convex();
  out.oracle = std::make_shared<NativeOracle>(B, out.frame);
  fill_samples(out, m, exec);
  return out;
}

ChordProfile width_profile(const PlanarBody& P) {
  const std::size_t m = P.size();
  require(m % 2 == 0, "width_profile: the support grid needs an even number of samples");
  std::vector<double> widths, params;
  for (std::size_t j = 0; j < m / 2; ++j) {
    widths.push_back(P.support[j] + P.support[j + m / 2]);
    params.push_back(P.theta[j]);
  }
  return summarize(std::move(widths), std::move(params));
}

ChordProfile equichordal_test(const PlanarBody& P, const Vec2& p, int m) {
  require(m >= 1, "equichordal_test: m must be >= 1");
  if (!(P.oracle->membership(p) < 0.0)) fail(ErrorKind::InvalidArgument, "equichordal_test: point must be interior");
  std::vector<double> lengths, params;
  for (int k = 0; k < m; ++k) {
    const double a = kPi * k / m;
    const Vec2 d(std::cos(a), std::sin(a));
    const auto fwd = P.oracle->exit_distance(p, d);
    const auto bwd = P.oracle->exit_distance(p, -d);
    if (!fwd || !bwd) fail(ErrorKind::InvalidArgument, "equichordal_test: chord through the point not found");
    lengths.push_back(*fwd + *bwd);
    params.push_back(a);
  }
  return summarize(std::move(lengths), std::move(params));
}

ChordProfile planar_tangent_chords(const PlanarBody& K, const PlanarBody& L, int m) {
  require(m >= 1, "planar_tangent_chords: m must be >= 1");
  require(K.frame.e1.isApprox(L.frame.e1, 1e-12) && K.frame.e2.isApprox(L.frame.e2, 1e-12),
          "planar_tangent_chords: bodies must share the frame axes");
  if (!L.strictly_convex) fail(ErrorKind::UnsupportedBody, "planar_tangent_chords requires a strictly convex inner body");
  std::vector<double> lengths, params;
  for (int j = 0; j < m; ++j) {
    const double theta = 2.0 * kPi * j / m;
    const Vec2 v(std::cos(theta), std::sin(theta));
    const Vec2 touch = K.frame.to_local(L.frame.to_world(L.oracle->boundary_point(v)));
    const Vec2 d = perp(v);
    const auto fwd = K.oracle->exit_distance(touch, d);
    const auto bwd = K.oracle->exit_distance(touch, -d);
    if (!fwd || !bwd || *fwd < 0.0 || *bwd < 0.0)
      fail(ErrorKind::InconsistentContainment, "a tangent line of the inner body leaves the outer body");
    lengths.push_back(*fwd + *bwd);
    params.push_back(theta);
  }
  return summarize(std::move(lengths), std::move(params));
}

Chord affine_diameter(const PlanarBody& P, const Vec2& v) {
  if (!P.strictly_convex) fail(ErrorKind::UnsupportedBody, "affine_diameter requires a strictly convex body");
  const Vec2 vn = v.normalized();
  return Chord::between(P.frame.to_world(P.oracle->boundary_point(-vn)), P.frame.to_world(P.oracle->boundary_point(vn)));
}

BinormalResult binormal_search(const PlanarBody& P) {
  BinormalResult res;
  if (!P.strictly_convex) return res;
  constexpr int kGrid = 512;
  auto mismatch = [&](double psi) {
    const Vec2 v(std::cos(psi), std::sin(psi));
    const Vec2 c = P.oracle->boundary_point(v) - P.oracle->boundary_point(-v);
    return std::atan2(v.x() * c.y() - v.y() * c.x(), v.dot(c));
  };
  std::vector<double> psi(kGrid + 1), f(kGrid + 1);
  for (int k = 0; k <= kGrid; ++k) {
    psi[static_cast<std::size_t>(k)] = kPi * k / kGrid;
    f[static_cast<std::size_t>(k)] = k < kGrid ? mismatch(psi[static_cast<std::size_t>(k)]) : f[0];
  }
  constexpr double kZero = 1e-10;
  std::vector<double> roots;
  for (int k = 0; k < kGrid; ++k) {
    const double fa = f[static_cast<std::size_t>(k)], fb = f[static_cast<std::size_t>(k + 1)];
    if (std::abs(fa) < kZero) {
      roots.push_back(psi[static_cast<std::size_t>(k)]);
      continue;
    }
    if (std::abs(fb) < kZero || (fa < 0.0) == (fb < 0.0)) continue;
    double lo = psi[static_cast<std::size_t>(k)], hi = psi[static_cast<std::size_t>(k + 1)], flo = fa;
    for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = mismatch(mid);
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    roots.push_back(0.5 * (lo + hi));
  }
  if (roots.size() > 32) {
    res.degenerate_family = true;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int k = 0; k < kGrid; ++k) {
      const double len = affine_diameter(P, Vec2(std::cos(psi[static_cast<std::size_t>(k)]), std::sin(psi[static_cast<std::size_t>(k)]))).length;
      lo = std::min(lo, len);
      hi = std::max(hi, len);
    }
    res.family_min_length = lo;
    res.family_max_length = hi;
    return res;
  }
  for (double r : roots) {
    res.angles.push_back(r);
    res.chords.push_back(affine_diameter(P, Vec2(std::cos(r), std::sin(r))));
  }
  return res;
}

std::vector<Plane> supporting_planes_parallel(const Body& L, const Direction& u, int m) {
  require(m >= 1, "supporting_planes: m must be >= 1");
  require(L.dim() == 3, "supporting_planes: body must be 3D");
  const auto [e1, e2] = orthonormal_complement(u.vec());
  std::vector<Plane> out;
  for (int j = 0; j < m; ++j) {
    const double phi = 2.0 * kPi * j / m;
    const Direction v(std::cos(phi) * e1 + std::sin(phi) * e2);
    out.push_back(Plane{v, L.support(v.vec())});
  }
  return out;
}

std::vector<Plane> supporting_planes_through(const Body& L, const Vec3& x, int m) {
  require(L.dim() == 3, "supporting_planes: body must be 3D");
  std::vector<Plane> out;
  for (const Vec3& n : support_cone_normals(L, x, m)) out.push_back(Plane{Direction(n), x.dot(n)});
  return out;
}

}  // namespace equichord
