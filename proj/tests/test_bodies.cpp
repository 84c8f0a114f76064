#include <cmath>
#include <random>

#include "doctest.h"
#include "equichord/body.hpp"
#include "equichord/body_json.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace equichord;
using namespace fixtures;

namespace {

std::vector<Body> corpus() {
  HarmonicBody3D bumpy = harmonic_ball(4);
  bumpy.coeff(3, 1) = 0.04;
  bumpy.coeff(2, -2) = 0.05;
  bumpy.coeff(1, 0) = 0.2;
  FourierBody2D f;
  f.a0 = 1.0;
  f.coeffs = {{0.1, 0.0}, {0.05, -0.02}, {0.0, 0.03}};
  return {ball(1.0),
          prolate(),
          Body(Ellipsoid::ellipse(2.0, 1.0, Vec2(0.3, -0.2))),
          Body(f),
          Body(bumpy),
          perturbed_prolate()};
}

}  // namespace

TEST_CASE("support examples") {
  for (const auto& d : sphere_grid(20)) CHECK(ball(1.0).support(d.vec()) == doctest::Approx(1.0));
  CHECK(support(prolate(), Direction(1, 0, 0)) == doctest::Approx(2.0).epsilon(1e-15));
  FourierBody2D f;
  CHECK(Body(f).support(Direction::planar(37.0 * kPi / 180.0)) == doctest::Approx(1.0));
}

TEST_CASE("boundary point examples") {
  CHECK((boundary_point(ball(1.0), Direction(0, 0, 1)) - Vec3(0, 0, 1)).norm() < 1e-15);
  CHECK((boundary_point(prolate(), Direction(1, 0, 0)) - Vec3(2, 0, 0)).norm() < 1e-15);
  const Body e(Ellipsoid::ellipse(2.0, 1.0));
  CHECK((boundary_point(e, Direction::planar(kPi / 2)) - Vec3(0, 1, 0)).norm() < 1e-15);
}

TEST_CASE("membership examples") {
  CHECK(membership(ball(1.0), Vec3::Zero()) == doctest::Approx(-1.0));
  CHECK(membership(ball(1.0), Vec3(2, 0, 0)) > 0.0);
  CHECK(std::abs(membership(prolate(), Vec3(2, 0, 0))) < 1e-12);
  // Support-function membership is the signed distance for exterior points.
  const Body hb(harmonic_ball(2, 1.0));
  CHECK(hb.membership(Vec3(2, 0, 0)) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(hb.membership(Vec3(0, 0.3, 0)) == doctest::Approx(-0.7).epsilon(1e-9));
}

TEST_CASE("boundary points are consistent with support and membership") {
  for (const Body& b : corpus()) {
    INFO(b.kind());
    REQUIRE(b.validation().valid);
    for (const auto& d : body_grid(b, 256)) {
      const Vec3 x = b.boundary_point(d.vec());
      CHECK(std::abs(x.dot(d.vec()) - b.support(d.vec())) < 1e-9);
      CHECK(std::abs(b.membership(x)) < 1e-7);
    }
    CHECK(b.membership(b.anchor()) < 0.0);
  }
}

TEST_CASE("support is sublinear") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (const Body& b : corpus()) {
    for (int k = 0; k < 200; ++k) {
      Vec3 u(g(rng), g(rng), b.dim() == 3 ? g(rng) : 0.0), v(g(rng), g(rng), b.dim() == 3 ? g(rng) : 0.0);
      u.normalize();
      v.normalize();
      const Vec3 s = u + v;
      if (s.norm() < 1e-6) continue;
      CHECK(b.support(s.normalized()) * s.norm() <= b.support(u) + b.support(v) + 1e-9);
    }
  }
}

TEST_CASE("support jet matches finite differences") {
  for (const Body& b : corpus()) {
    const Vec3 y = b.dim() == 3 ? Vec3(0.3, -0.5, 0.7) : Vec3(0.3, -0.5, 0.0);
    const SupportJet j = b.support_jet(y);
    const double h = 1e-6;
    for (int axis = 0; axis < b.dim(); ++axis) {
      Vec3 e = Vec3::Zero();
      e[axis] = h;
      const double fd = (b.support(y + e) - b.support(y - e)) / (2 * h);
      CHECK(std::abs(fd - j.gradient[axis]) < 1e-7);
      const Vec3 gd = (b.support_jet(y + e).gradient - b.support_jet(y - e).gradient) / (2 * h);
      for (int k = 0; k < b.dim(); ++k) CHECK(std::abs(gd[k] - j.hessian(k, axis)) < 1e-5);
    }
  }
}

TEST_CASE("harmonic support agrees with the independent harmonic oracle") {
  const Body b = perturbed_prolate();
  for (const auto& d : sphere_grid(50))
    CHECK(std::abs(b.support(d.vec()) - oracle::perturbed_support(d.vec())) < 1e-13);
}

TEST_CASE("contains_body") {
  CHECK(contains_body(ball(1.0), ball(0.6), 0.1));
  CHECK_FALSE(contains_body(ball(1.0), ball(0.99), 0.1));
  CHECK_FALSE(contains_body(Body(Ellipsoid::ellipse(1, 2)), Body(Ellipsoid::ellipse(2, 1)), 0.0));
  CHECK_THROWS_AS(contains_body(ball(1.0), ball(0.5), -1.0), GeometryError);
}

TEST_CASE("validation") {
  CHECK(validate(ball(1.0)).valid);
  FourierBody2D f;
  f.coeffs = {{0, 0}, {0, 0}, {0.5, 0}};
  const auto r = validate(Body(f));
  CHECK_FALSE(r.valid);
  REQUIRE_FALSE(r.violations.empty());
  CHECK(r.violations[0].worst_margin == doctest::Approx(1.0 - 8.0 * 0.5));
  CHECK_THROWS_AS(Body(f).boundary_point(Vec3(1, 0, 0)), GeometryError);

  Ellipsoid skew;
  skew.shape(0, 1) = 0.1;
  const auto rs = validate(Body(skew));
  CHECK_FALSE(rs.valid);
  CHECK(rs.violations[0].invariant.find("symmetric") != std::string::npos);

  HarmonicBody3D wobbly = harmonic_ball(4);
  wobbly.coeff(4, 0) = 0.8;
  CHECK_FALSE(validate(Body(wobbly)).valid);
}

TEST_CASE("apply_affine") {
  const Ellipsoid e = Ellipsoid::axes(Vec3(1.0, 2.0, 0.5), Vec3(0.1, 0.2, 0.3));
  const Ellipsoid same = apply_affine(e, Mat3::Identity(), Vec3::Zero());
  CHECK((same.shape - e.shape).norm() < 1e-15);
  const Ellipsoid circle = apply_affine(Ellipsoid::ellipse(2, 1), Vec3(0.5, 1, 1).asDiagonal(), Vec3::Zero());
  CHECK((circle.shape - Mat3::Identity()).norm() < 1e-15);
  CHECK(circle.dim == 2);
  const Ellipsoid stretched = apply_affine(Ellipsoid::ball(1.0), Vec3(2, 1, 1).asDiagonal(), Vec3::Zero());
  CHECK((stretched.shape - Mat3(Vec3(0.25, 1, 1).asDiagonal())).norm() < 1e-15);

  Mat3 m;
  m << 1.0, 0.3, -0.2, 0.1, 2.0, 0.4, 0.0, -0.5, 1.5;
  const Vec3 t(0.5, -1.0, 2.0);
  const Ellipsoid there = apply_affine(e, m, t);
  const Ellipsoid back = apply_affine(there, m.inverse(), -m.inverse() * t);
  CHECK((back.center - e.center).norm() < 1e-12);
  CHECK((back.shape - e.shape).norm() < 1e-12);
  CHECK_THROWS_AS(apply_affine(e, Mat3::Zero(), t), GeometryError);
}

TEST_CASE("odd Fourier terms removed gives central symmetry") {
  FourierBody2D f;
  f.coeffs = {{0.0, 0.0}, {0.1, 0.05}, {0.0, 0.0}, {0.01, -0.02}};
  for (int j = 0; j < 64; ++j) {
    const double t = 2 * kPi * j / 64;
    CHECK(std::abs(f.h(t) - f.h(t + kPi)) < 1e-15);
  }
}

TEST_CASE("homothets and translates") {
  const Vec3 q(0.2, -0.1, 0.3);
  for (const Body& b : corpus()) {
    const Vec3 qq = b.dim() == 3 ? q : Vec3(q.x(), q.y(), 0.0);
    const Body h = b.homothet(0.5, qq);
    const Body t = b.translated(qq);
    for (const auto& d : body_grid(b, 64)) {
      const Vec3& u = d.vec();
      CHECK(std::abs(h.support(u) - (0.5 * b.support(u) + 0.5 * qq.dot(u))) < 1e-12);
      CHECK(std::abs(t.support(u) - (b.support(u) + qq.dot(u))) < 1e-12);
    }
  }
}

TEST_CASE("json round trip is bit exact") {
  for (const Body& b : corpus()) {
    const std::string text = body_to_string(b);
    const Body back = body_from_string(text);
    CHECK(body_to_string(back) == text);
    for (const auto& d : body_grid(b, 32)) CHECK(back.support(d.vec()) == b.support(d.vec()));
  }
  CHECK_THROWS_AS(body_from_string("{"), GeometryError);
  CHECK_THROWS_AS(body_from_string(R"({"kind":"cube"})"), GeometryError);
  CHECK_THROWS_AS(body_from_string(R"({"kind":"sh3d","degree":2,"coeffs":[1,2]})"), GeometryError);
  const Body planar = body_from_string(R"({"kind":"ellipsoid","center":[0,0],"shape":[[1,0],[0,4]]})");
  CHECK(planar.dim() == 2);
  CHECK(planar.support(Vec3(0, 1, 0)) == doctest::Approx(0.5));
}
