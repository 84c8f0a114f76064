#include <chrono>
#include <cmath>

#include "doctest.h"
#include "equichord/checks.hpp"
#include "equichord/errors.hpp"
#include "fixtures.hpp"

using namespace equichord;
using namespace fixtures;

namespace {

CheckConfig small() {
  CheckConfig c;
  c.directions = 16;
  c.tangents = 32;
  c.apexes = 8;
  c.section_planes = 6;
  c.section_samples = 128;
  c.planes = 16;
  c.fit_samples = 128;
  c.shadow_samples = 64;
  c.axis_planes = 6;
  c.axis_points = 32;
  return c;
}

Body ellipse(double a, double b) { return Body(Ellipsoid::ellipse(a, b)); }

}  // namespace

TEST_CASE("every id is runnable and unknown ids are rejected") {
  CHECK(check_ids().size() == 15);
  CHECK_THROWS_AS(run_check("nope", {ball(1.0)}, small()), GeometryError);
  try {
    run_check("parallel", {ball(1.0)}, small());
    FAIL("missing L accepted");
  } catch (const GeometryError& e) {
    CHECK(e.kind() == ErrorKind::InvalidArgument);
  }
}

TEST_CASE("containment failures are reported as such") {
  try {
    run_check("parallel", {ball(1.0), ball(1.0, Vec3(0.8, 0, 0))}, small());
    FAIL("non-nested pair accepted");
  } catch (const GeometryError& e) {
    CHECK(e.kind() == ErrorKind::InconsistentContainment);
  }
}

TEST_CASE("parallel") {
  const Body K = prolate();
  const auto r = run_check("parallel", {K, K.homothet(0.5, Vec3::Zero())}, small());
  CHECK(r.hypothesis_residual < 1e-9);
  CHECK(r.conclusion_residual < 1e-9);
  CHECK(r.hypothesis_holds);
  CHECK(r.conclusion_holds);
  CHECK(r.metrics.at("homothety_ratio") == doctest::Approx(0.5));

  const auto off = run_check("parallel", {K, K.homothet(0.5, Vec3(0.3, 0, 0))}, small());
  CHECK(off.hypothesis_residual > 1e-3);
  CHECK_FALSE(off.conclusion_holds);
  CHECK_FALSE(r.assumptions.empty());
}

TEST_CASE("planar symmetric and lemma-ellipse") {
  const auto s = run_check("planar-symmetric", {ellipse(2, 1), ellipse(1, 0.5)}, small());
  CHECK(s.hypothesis_residual < 1e-12);
  CHECK(s.conclusion_residual < 1e-9);

  FourierBody2D f;
  f.coeffs = {{0, 0}, {0, 0}, {0.05, 0.02}};
  CHECK(run_check("planar-symmetric", {Body(f), disc(0.3)}, small()).hypothesis_residual > 1e-3);

  CheckConfig c = small();
  c.tangents = 512;
  const auto l = run_check("lemma-ellipse", {ellipse(2, 1), ellipse(1, 0.5)}, c);
  CHECK(l.hypothesis_holds);
  CHECK(l.conclusion_holds);
  CHECK(std::abs(l.metrics.at("min_length") - std::sqrt(3.0)) < 1e-7);
  CHECK(l.metrics.at("monotonicity_violations") == 0.0);
  CHECK(l.flags.at("strict_monotone"));
}

TEST_CASE("concurrent and slab") {
  const auto r = run_check("concurrent", {ball(1.0), ball(0.6), ball(2.0)}, small());
  CHECK(r.hypothesis_residual < 1e-9);
  CHECK(r.metrics.at("chord_min") == doctest::Approx(1.6).epsilon(1e-9));
  CHECK(r.conclusion_holds);

  CheckConfig c = small();
  c.slab = Slab{Vec3::UnitZ(), -2.0, 2.0};
  const auto s = run_check("concurrent-slab", {ball(1.0), ball(0.6)}, c);
  CHECK(s.hypothesis_residual < 1e-9);
  CHECK(s.metrics.at("chord_max") == doctest::Approx(1.6).epsilon(1e-9));

  const Body K = prolate();
  const auto e = run_check("concurrent", {K, K.homothet(0.5, Vec3::Zero()), ball(3.0)}, small());
  CHECK(e.hypothesis_residual > 1e-3);
  CHECK_FALSE(e.conclusion_holds);
}

TEST_CASE("supporting sections") {
  const auto p = run_check("sections-parallel", {ball(1.0), ball(0.6)}, small());
  CHECK(p.hypothesis_residual < 1e-5);
  CHECK(p.metrics.at("width_min") == doctest::Approx(1.6).epsilon(1e-5));
  CHECK(p.conclusion_holds);
  const auto c = run_check("sections-concurrent", {ball(1.0), ball(0.6), ball(2.0)}, small());
  CHECK(c.hypothesis_residual < 1e-5);
  const Body K = prolate();
  CHECK(run_check("sections-parallel", {K, K.homothet(0.5, Vec3::Zero())}, small()).hypothesis_residual > 1e-3);
}

TEST_CASE("suss") {
  CheckInputs in{ball(0.5)};
  in.p = Vec3::Zero();
  const auto r = run_check("suss", in, small());
  CHECK(r.hypothesis_residual < 1e-6);
  CHECK(r.conclusion_holds);
  in.p = Vec3(0.2, 0, 0);
  const auto off = run_check("suss", in, small());
  CHECK(off.hypothesis_residual > 0.04);
  // Plane through p with normal n cuts a disc of radius sqrt(r^2 - <n,p>^2).
  double offset = 0.0;
  for (const auto& n : sphere_grid(16)) offset = std::max(offset, std::abs(n.vec().x()) * 0.2);
  CHECK(off.metrics.at("width_min") == doctest::Approx(2.0 * std::sqrt(0.25 - offset * offset)).epsilon(1e-6));
  CHECK(off.metrics.at("width_min") >= 2.0 * std::sqrt(0.21) - 1e-9);
  in.p = Vec3(2, 0, 0);
  CHECK_THROWS_AS(run_check("suss", in, small()), GeometryError);
}

TEST_CASE("lemma2") {
  const auto s = run_check("lemma2", {Body(Ellipsoid::diagonal(Vec3(1, 1, 0.25)))}, small());
  CHECK(s.hypothesis_residual < 1e-6);
  CHECK(s.conclusion_residual < 1e-6);
  const auto t = run_check("lemma2", {Body(Ellipsoid::diagonal(Vec3(0.25, 1, 1.0 / 9.0)))}, small());
  CHECK(t.hypothesis_residual > 1e-3);
}

TEST_CASE("projection tangent chords") {
  const auto r = run_check("projection-tangent", {ball(1.0), ball(0.6)}, small());
  CHECK(r.hypothesis_residual < 1e-7);
  CHECK(r.metrics.at("constant") == doctest::Approx(1.6).epsilon(1e-9));
  CHECK_FALSE(r.flags.at("unit_constant"));
  const double rr = std::sqrt(1.0 - 0.25);
  const auto u = run_check("projection-tangent", {ball(1.0), ball(rr)}, small());
  CHECK(u.flags.at("unit_constant"));
}

TEST_CASE("projection equichordal point") {
  CheckInputs in{ball(1.0)};
  in.p = Vec3::Zero();
  const auto r = run_check("projection-equipoint", in, small());
  CHECK(r.hypothesis_residual < 1e-7);
  CHECK(r.metrics.at("axis_circle_residual") < 1e-6);
  CHECK(r.conclusion_holds);
  CheckInputs e{prolate()};
  e.p = Vec3::Zero();
  CHECK(run_check("projection-equipoint", e, small()).hypothesis_residual > 0.1);
}

TEST_CASE("conjecture hypotheses") {
  CheckInputs balls{ball(1.0), ball(0.6)};
  for (const char* id : {"conj-2.3-hypothesis", "conj-6.2", "conj-6.3"}) {
    const auto r = run_check(id, balls, small());
    CAPTURE(id);
    CHECK(r.hypothesis_only);
    CHECK(r.hypothesis_residual < 1e-6);
  }
  const auto p = run_check("conj-2.2", {ellipse(2, 1), ellipse(1, 0.5)}, small());
  CHECK(p.hypothesis_only);
  CHECK(p.hypothesis_residual < 1e-9);
  const Body K = prolate();
  CheckInputs el{K, K.homothet(0.5, Vec3::Zero())};
  CHECK(run_check("conj-6.2", el, small()).hypothesis_residual > 1e-3);
}

TEST_CASE("report json round trip of verdict keys") {
  const auto r = run_check("parallel", {ball(1.0), ball(0.5)}, small());
  const auto j = to_json(r);
  CHECK(j.at("check_id") == "parallel");
  CHECK(j.at("verdicts").at("hypothesis_holds") == true);
  CHECK(j.at("config").at("directions") == 16);
}

TEST_CASE("projected tangent chords of homothetic ellipsoids depend on the projection") {
  // In the projection along u, the chord parallel to w tangent to the s-scaled
  // ellipse is 2 sqrt(1 - s^2) times the radial function of the projected
  // ellipse at w, which is 1 / sqrt(w'Aw - (w'Au)^2 / u'Au).
  const Mat3 A = Vec3(0.25, 1.0, 1.0).asDiagonal();
  const double s = 0.5;
  auto oracle = [&](const Vec3& w, const Vec3& u) {
    const double q = w.dot(A * w) - std::pow(w.dot(A * u), 2) / u.dot(A * u);
    return 2.0 * std::sqrt(1.0 - s * s) / std::sqrt(q);
  };
  const Body K = prolate();
  const Body L = K.homothet(s, Vec3::Zero());
  const Vec3 w = Vec3(1, 1, 0).normalized();
  for (const Vec3& u : {Vec3(0, 0, 1), Vec3(Vec3(1, -1, 0).normalized()), Vec3(Vec3(1, -1, 1).normalized())}) {
    const Vec3 n = u.cross(w);
    const Vec3 touch = L.boundary_point(n);
    const double len = *K.shadow_exit_distance(touch, w, n) + *K.shadow_exit_distance(touch, -w, n);
    CHECK(len == doctest::Approx(oracle(w, u)).epsilon(1e-9));
  }
  CHECK(oracle(w, Vec3(0, 0, 1)) != doctest::Approx(oracle(w, Vec3(1, -1, 0).normalized())));
}

TEST_CASE("serial and parallel reports agree") {
  const Body K = perturbed_prolate();
  const Body L = prolate().homothet(0.5, Vec3::Zero());
  CheckConfig c = small();
  for (const char* id : {"parallel", "sections-parallel", "projection-tangent"}) {
    c.exec = Exec::Serial;
    const auto a = to_json(run_check(id, {K, L}, c));
    c.exec = Exec::Parallel;
    auto b = to_json(run_check(id, {K, L}, c));
    CAPTURE(id);
    CHECK(a.dump() == b.dump());
  }
}

TEST_CASE("lemma-ellipse on a nearly round pair") {
  CheckConfig c = small();
  c.tangents = 512;
  const auto r = run_check("lemma-ellipse", {ellipse(1.1, 1.0), ellipse(0.55, 0.5)}, c);
  CHECK(r.all_verdicts_true());
  CHECK(r.metrics.at("monotonicity_violations") == 0.0);
  CHECK(r.metrics.at("argmin_angle_error") < 2.0 * kPi / 512);
}
