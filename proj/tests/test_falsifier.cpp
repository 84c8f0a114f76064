#include <cmath>

#include "doctest.h"
#include "equichord/errors.hpp"
#include "equichord/falsifier.hpp"
#include "fixtures.hpp"

using namespace equichord;
using namespace fixtures;

TEST_CASE("family specs") {
  CHECK(Family::parse("fourier2d(6)").parameter_count() == 12);
  CHECK(Family::parse("sh3d(2)").parameter_count() == 8);
  CHECK(Family::parse("ellipsoid+sh(4)").parameter_count() == 21);
  CHECK(Family::parse("ellipsoid+sh-perturbation(3)").to_string() == "ellipsoid+sh(3)");
  for (const char* bad : {"fourier2d(17)", "sh3d(9)", "ellipsoid+sh(1)", "cube(2)", "sh3d"})
    CHECK_THROWS_AS(Family::parse(bad), GeometryError);
  const Body b = Family::parse("ellipsoid+sh(3)").base();
  for (const auto& u : sphere_grid(32)) CHECK(b.support(u.vec()) == doctest::Approx(prolate().support(u.vec())));
  CHECK(Family::parse("sh3d(3)").base().support(Vec3(0, 0.6, 0.8)) == doctest::Approx(1.0));
}

TEST_CASE("residuals") {
  const CheckConfig c = SearchConfig::default_check();
  CHECK(residual("conj-2.2", {disc(1.0), disc(0.5)}, c) < 1e-12);
  const Body K = perturbed_prolate();
  bool pen = true;
  CHECK(residual("parallel", {K, prolate().homothet(0.5, Vec3::Zero())}, c, &pen) > 1e-3);
  CHECK_FALSE(pen);

  FourierBody2D f;
  f.coeffs = {{0, 0}, {0.6, 0}};  // h + h'' < 0 somewhere
  CHECK(residual("conj-2.2", {Body(f), disc(0.2)}, c, &pen) >= 10.0);
  CHECK(pen);
  CHECK(residual("parallel", {ball(0.5), ball(1.0)}, c) >= 10.0);
}

TEST_CASE("structure distance") {
  FourierBody2D sym;
  sym.coeffs = {{0.1, -0.2}, {0.05, 0.03}, {0, 0}, {0.01, 0.02}};
  CHECK(structure_distance("conj-2.2", Body(sym), std::nullopt) < 1e-12);
  FourierBody2D odd = sym;
  odd.coeffs[2] = {0.02, 0.0};
  CHECK(structure_distance("conj-2.2", Body(odd), std::nullopt) > 1e-3);
  CHECK(structure_distance("conj-6.2", Body(Ellipsoid::ellipse(2, 1)), std::nullopt) < 1e-9);
  HarmonicBody3D s = harmonic_ball(3);
  s.coeff(3, 0) = 0.05;
  CHECK(structure_distance("conj-6.3", Body(s), std::nullopt) > 1e-3);
  CHECK(structure_distance("conj-6.3", ball(1.0), std::nullopt) < 1e-9);
}

TEST_CASE("search descends and is reproducible") {
  SearchConfig c;
  c.target = "conj-2.2";
  c.family = Family::parse("fourier2d(6)");
  c.coupling = Coupling::Fixed;
  c.L = disc(0.5);
  c.seed = 42;
  c.budget = 500;
  const SearchTrace a = search(c);
  CHECK(a.evaluations <= 500);
  REQUIRE(a.iterates.size() >= 2);
  CHECK(a.best().residual < a.iterates.front().residual);
  for (std::size_t i = 1; i < a.iterates.size(); ++i) {
    CHECK(a.iterates[i].residual < a.iterates[i - 1].residual);
    CHECK(a.iterates[i].evaluation > a.iterates[i - 1].evaluation);
  }
  const SearchTrace b = search(c);
  CHECK(a.to_json().dump() == b.to_json().dump());
  CHECK(a.to_csv() == b.to_csv());
  c.seed = 43;
  CHECK(search(c).to_json().dump() != a.to_json().dump());
}

TEST_CASE("search edge cases") {
  SearchConfig c;
  c.family = Family::parse("ellipsoid+sh(2)");
  c.budget = 1;
  const SearchTrace t = search(c);
  CHECK(t.evaluations == 1);
  CHECK(t.iterates.size() == 1);
  CHECK(t.termination == "budget");
  CHECK(t.to_csv().rfind("iteration,residual,structure_distance\n", 0) == 0);

  c.budget = 0;
  CHECK_THROWS_AS(search(c), GeometryError);
  c.budget = 10;
  c.target = "conj-2.2";
  CHECK_THROWS_AS(search(c), GeometryError);  // 3D family for a planar target
  c.target = "lemma-ellipse";
  CHECK_THROWS_AS(search(c), GeometryError);
}
