// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
// Exit status is the number of failing criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "equichord/checks.hpp"
#include "equichord/chords.hpp"
#include "equichord/falsifier.hpp"
#include "equichord/fitting.hpp"
#include "equichord/planar.hpp"
#include "equichord/shadow.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace equichord;
using namespace fixtures;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string num(double x) {
  std::ostringstream s;
  s.precision(3);
  s << x;
  return s.str();
}

CheckInputs pair(const Body& K, const Body& L) { return {K, L, std::nullopt, std::nullopt}; }

// ---------------------------------------------------------------------------

Outcome c1_parallel_ellipsoids() {
  Outcome o;
  const auto t0 = Clock::now();
  const Body K = prolate();
  const Body L = K.homothet(0.5, Vec3::Zero());
  CheckConfig cfg;
  cfg.directions = 64;
  cfg.tangents = 128;
  const CheckReport r = run_check("parallel", pair(K, L), cfg);
  o.require(r.hypothesis_residual < 1e-6, "max spread " + num(r.hypothesis_residual) + " < 1e-6");
  const ChordProfile ez = parallel_chord_profile(K, L, Direction(0, 0, 1), 128);
  double err = 0.0;
  for (double len : ez.lengths) err = std::max(err, std::abs(len - std::sqrt(3.0)));
  o.require(ez.lengths.size() == 128 && err < 1e-7, "e_z constant sqrt(3), error " + num(err));
  const double t = seconds_since(t0);
  o.require(t < 30.0, "runtime " + num(t) + " s < 30 s");
  return o;
}

Outcome c2_lemma_ellipse() {
  Outcome o;
  const Body K(Ellipsoid::ellipse(2.0, 1.0)), L(Ellipsoid::ellipse(1.0, 0.5));
  const int m = 512;
  const ChordProfile p = planar_chord_profile(K, L, m);
  o.require(p.lengths.size() == static_cast<std::size_t>(m), "512 chords");
  if (!o.pass) return o;
  o.require(std::abs(p.min - std::sqrt(3.0)) < 1e-7, "min sqrt(3), error " + num(std::abs(p.min - std::sqrt(3.0))));
  const double step = 2.0 * kPi / m;
  bool at_axis = true;
  for (int j = 0; j < m; ++j) {
    if (p.lengths[j] > p.min * (1 + 1e-12)) continue;
    const double d = std::min(std::fmod(p.parameters[j], kPi), kPi - std::fmod(p.parameters[j], kPi));
    at_axis = at_axis && d <= step;
  }
  o.require(at_axis, "minimizers at {0, pi} within 2pi/512");
  // Strict growth from each minimizer (0, pi) to the neighbouring maxima (pi/2, 3pi/2).
  int violations = 0;
  for (int start : {0, m / 2})
    for (int dir : {1, -1})
      for (int k = 0; k < m / 4; ++k) {
        const int a = ((start + dir * k) % m + m) % m, b = ((start + dir * (k + 1)) % m + m) % m;
        if (!(p.lengths[b] > p.lengths[a])) ++violations;
      }
  o.require(violations == 0, "strict monotone growth, " + std::to_string(violations) + " violations");
  return o;
}

Outcome c3_concurrent_balls() {
  Outcome o;
  const Body K = ball(1.0), L = ball(0.6), M = ball(2.0);
  double err = 0.0;
  std::size_t count = 0;
  for (const auto& u : sphere_grid(32)) {
    const ChordProfile p = concurrent_chord_profile(K, L, M.boundary_point(u.vec()), 64);
    for (double len : p.lengths) err = std::max(err, std::abs(len - 1.6)), ++count;
  }
  o.require(count == 32 * 64 && err < 1e-7, "apex chords 1.6, error " + num(err));
  double slab_err = 0.0;
  std::size_t slab_count = 0;
  for (double z : {-2.0, 2.0})
    for (const auto& v : circle_grid(16)) {
      const Vec3 x = Vec3(0, 0, z) + 1.3 * v.vec();
      const ChordProfile p = concurrent_chord_profile(K, L, x, 64);
      for (double len : p.lengths) slab_err = std::max(slab_err, std::abs(len - 1.6)), ++slab_count;
    }
  o.require(slab_count == 32 * 64 && slab_err < 1e-7, "slab chords 1.6, error " + num(slab_err));
  CheckConfig cfg;
  cfg.apexes = 32;
  cfg.tangents = 64;
  o.require(run_check("concurrent", {K, L, M, std::nullopt}, cfg).all_verdicts_true(), "concurrent check verdicts");
  cfg.slab = Slab{Vec3::UnitZ(), -2.0, 2.0};
  o.require(run_check("concurrent-slab", pair(K, L), cfg).all_verdicts_true(), "slab check verdicts");
  return o;
}

Outcome c4_sensitivity() {
  Outcome o;
  const Body K = perturbed_prolate(0.05);
  const Body L = prolate().homothet(0.5, Vec3::Zero());
  const QuadricFit fit = fit_body(K, 256);
  o.require(fit.rms_residual > 1e-3, "quadric-fit residual " + num(fit.rms_residual) + " > 1e-3");
  CheckConfig cfg;
  cfg.directions = 64;
  cfg.tangents = 128;
  const CheckReport r = run_check("parallel", pair(K, L), cfg);
  o.require(r.hypothesis_residual > 1e-3, "parallel hypothesis residual " + num(r.hypothesis_residual) + " > 1e-3");
  // Magnitude against the brute-force halfspace oracle (u = e_z, normals 0 and pi/2).
  const ChordProfile ez = parallel_chord_profile(K, L, Direction(0, 0, 1), 128);
  const double top0 = 2.0 * oracle::top_exit(oracle::perturbed_support, 1.0, 0.0);
  const double top1 = 2.0 * oracle::top_exit(oracle::perturbed_support, 0.0, 0.5);
  o.require(std::abs(top0 - oracle::chord_at_normal_0) < 1e-8 && std::abs(top1 - oracle::chord_at_normal_half_pi) < 1e-8,
            "oracle reproduces frozen chords");
  const double e0 = std::abs(ez.lengths[0] - oracle::chord_at_normal_0);
  const double e1 = std::abs(ez.lengths[32] - oracle::chord_at_normal_half_pi);
  o.require(std::max(e0, e1) < 1e-7, "chords match oracle, error " + num(std::max(e0, e1)));
  const double bound = (oracle::chord_at_normal_0 - oracle::chord_at_normal_half_pi) / ez.max;
  o.require(ez.relative_spread >= bound - 1e-9, "e_z spread " + num(ez.relative_spread) + " >= oracle bound " + num(bound));
  return o;
}

Outcome c5_sections() {
  Outcome o;
  CheckConfig cfg;
  cfg.section_samples = 512;
  cfg.hypothesis_tol = 1e-5;
  const Body K = ball(1.0), L = ball(0.6);
  for (const char* id : {"sections-parallel", "sections-concurrent"}) {
    const CheckReport r = run_check(id, {K, L, ball(2.0), std::nullopt}, cfg);
    const double err = std::max(std::abs(r.metrics.at("width_min") - 1.6), std::abs(r.metrics.at("width_max") - 1.6));
    o.require(err < 1e-5 && r.all_verdicts_true(), std::string(id) + " widths 1.6, error " + num(err));
  }
  return o;
}

Outcome c6_suss() {
  Outcome o;
  CheckConfig cfg;
  cfg.planes = 64;
  CheckInputs in{ball(0.5), std::nullopt, std::nullopt, Vec3::Zero()};
  const CheckReport r = run_check("suss", in, cfg);
  const double err = std::max(std::abs(r.metrics.at("width_min") - 1.0), std::abs(r.metrics.at("width_max") - 1.0));
  o.require(err < 1e-6 && r.hypothesis_holds, "centered widths 1, error " + num(err));
  in.p = Vec3(0.2, 0.0, 0.0);
  const CheckReport off = run_check("suss", in, cfg);
  o.require(off.hypothesis_residual > 0.04, "offset hypothesis residual " + num(off.hypothesis_residual) + " > 0.04");
  // The plane through p orthogonal to the offset gives 2 sqrt(0.21).
  const PlanarBody s = section(ball(0.5), Plane::through(*in.p, Direction(1, 0, 0)), 512);
  const ChordProfile w = width_profile(s);
  o.require(std::abs(w.mean - 2.0 * std::sqrt(0.21)) < 1e-6, "off-center section width " + num(w.mean));
  return o;
}

Outcome c7_lemma2() {
  Outcome o;
  const CheckReport s = run_check("lemma2", {Body(Ellipsoid::diagonal(Vec3(1, 1, 0.25)))});
  o.require(s.hypothesis_residual < 1e-6 && s.conclusion_residual < 1e-6,
            "spheroid residuals " + num(s.hypothesis_residual) + ", " + num(s.conclusion_residual));
  const CheckReport t = run_check("lemma2", {Body(Ellipsoid::diagonal(Vec3(0.25, 1, 1.0 / 9.0)))});
  o.require(t.hypothesis_residual > 1e-3, "triaxial hypothesis residual " + num(t.hypothesis_residual));
  return o;
}

Outcome c8_blaschke() {
  Outcome o;
  const Ellipsoid general = apply_affine(Ellipsoid::axes(Vec3(2.0, 1.0, 0.5)),
                                         rotation_between(Vec3::UnitZ(), Vec3(1, 2, 3).normalized()), Vec3(0.3, 0, -1));
  double worst = 0.0;
  for (const Body& K : {ball(1.0), prolate(), Body(Ellipsoid::diagonal(Vec3(1, 1, 0.25))),
                        Body(Ellipsoid::diagonal(Vec3(0.25, 1, 1.0 / 9.0))), Body(general)})
    for (const auto& u : sphere_grid(64)) worst = std::max(worst, shadow_boundary(K, u, 128).rms_residual);
  o.require(worst < 1e-8, "worst planarity rms " + num(worst));
  return o;
}

Outcome c9_projection_tangent() {
  Outcome o;
  CheckConfig cfg;
  cfg.directions = 64;
  const CheckReport r = run_check("projection-tangent", pair(ball(1.0), ball(0.6)), cfg);
  const double expect = 2.0 * std::sqrt(1.0 - 0.36);
  const double err = std::max(std::abs(r.metrics.at("chord_min") - expect), std::abs(r.metrics.at("chord_max") - expect));
  o.require(err < 1e-7, "chords 2 sqrt(R^2 - r^2), error " + num(err));
  o.require(!r.flags.at("unit_constant"), "unit flag off for R^2 - r^2 = 0.64");
  const CheckReport u = run_check("projection-tangent", pair(ball(1.0), ball(std::sqrt(0.75))), cfg);
  o.require(u.flags.at("unit_constant"), "unit flag on for R^2 - r^2 = 0.25");
  return o;
}

Outcome c10_projection_equipoint() {
  Outcome o;
  CheckInputs in{ball(1.0), std::nullopt, std::nullopt, Vec3::Zero()};
  const CheckReport r = run_check("projection-equipoint", in);
  o.require(r.metrics.at("projection_equichordal_spread") < 1e-7, "ball projections equichordal, spread " +
                                                                      num(r.metrics.at("projection_equichordal_spread")));
  const double axis = std::max(r.metrics.at("axis_circle_residual"), r.metrics.at("axis_center_residual"));
  o.require(axis < 1e-6, "axis residual " + num(axis));
  in.K = prolate();
  const CheckReport e = run_check("projection-equipoint", in);
  // Chords through the center range over the axes 2b = 2 and 2a = 4.
  o.require(e.hypothesis_residual > 0.1, "ellipsoid hypothesis residual " + num(e.hypothesis_residual) + " > 0.1");
  o.require(e.metrics.at("equichordal_spread_3d") >= (4.0 - 2.0) / 4.0 - 1e-9, "axis-chord oracle bound");
  return o;
}

Outcome c11_hammer() {
  Outcome o;
  std::mt19937_64 rng(2024);
  auto draw = [&](double a) { return a * (2.0 * static_cast<double>(rng() >> 11) * 0x1p-53 - 1.0); };
  auto symmetric = [&](double amp) {
    FourierBody2D f;
    f.coeffs.assign(8, {0.0, 0.0});
    for (int k = 2; k <= 8; k += 2) f.coeffs[k - 1] = {draw(amp / (k * k)), draw(amp / (k * k))};
    return f;
  };
  double worst_angle = 0.0, worst_pair = 0.0;
  int bodies = 0;
  while (bodies < 20) {
    FourierBody2D f = symmetric(0.6);
    const Vec2 c(draw(0.3), draw(0.3));
    f.coeffs[0] = {c.x(), c.y()};  // centre of symmetry
    const Body K(f);
    if (!K.validation().valid || !K.strictly_convex()) continue;
    ++bodies;
    const Vec3 center(c.x(), c.y(), 0.0);
    for (const auto& d : circle_grid(64)) {
      const Vec3 a = center + *K.exit_distance(center, d.vec()) * d.vec();
      const Vec3 b = center - *K.exit_distance(center, -d.vec()) * d.vec();
      const Vec3 na = K.support_gap(a).direction, nb = K.support_gap(b).direction;
      worst_angle = std::max(worst_angle, std::acos(std::clamp(-na.dot(nb), -1.0, 1.0)));
    }
    // A second symmetric body, shrunk and moved to the same centre.
    std::optional<Body> L;
    while (!L) {
      const Body g = Body(symmetric(0.6)).homothet(0.4, Vec3::Zero()).translated(center);
      if (g.validation().valid && g.strictly_convex() && contains_body(K, g, 0.0)) L = g;
    }
    const ChordProfile p = planar_chord_profile(K, *L, 256);
    if (p.lengths.size() != 256) {
      o.require(false, "grazing chords in the planar pair");
      continue;
    }
    for (int j = 0; j < 128; ++j) worst_pair = std::max(worst_pair, std::abs(p.lengths[j] - p.lengths[j + 128]));
  }
  o.require(worst_angle < 1e-7, "affine-diameter angle " + num(worst_angle));
  o.require(worst_pair < 1e-8, "opposite tangent chords mismatch " + num(worst_pair));
  return o;
}

Outcome c12_falsifier() {
  Outcome o;
  SearchConfig cfg;
  cfg.target = "parallel";
  cfg.family = Family::parse("ellipsoid+sh(2)");
  cfg.coupling = Coupling::Homothet;
  cfg.budget = 200;
  cfg.seed = 7;
  o.require(search(cfg).to_json().dump() == search(cfg).to_json().dump(), "seeded trace bit-identical");

  cfg.budget = 2000;
  for (std::uint64_t seed : {1, 2, 3}) {
    cfg.seed = seed;
    const SearchTrace t = search(cfg);
    bool monotone = true;
    for (std::size_t i = 1; i < t.iterates.size(); ++i) monotone = monotone && t.iterates[i].residual <= t.iterates[i - 1].residual;
    const Iterate& b = t.best();
    const bool small = b.residual < 1e-6;
    const bool consistent = !small || b.structure_distance < 1e-4;
    std::cout << "    seed " << seed << ": residual " << num(b.residual) << ", ellipsoid-fit distance "
              << num(b.structure_distance) << ", " << t.evaluations << " evaluations, " << t.termination
              << (small ? (consistent ? " (consistent)" : " (ALARM)") : " (residual above 1e-6)") << "\n";
    o.require(monotone, "seed " + std::to_string(seed) + " best-so-far non-increasing");
    o.require(consistent && !t.alarm, "seed " + std::to_string(seed) + " no alarm");
  }
  return o;
}

Outcome c13_corpus(const std::string& cli, const std::string& golden) {
  Outcome o;
  std::ifstream f(golden + "/corpus.json");
  const auto corpus = nlohmann::json::parse(f);
  const auto t0 = Clock::now();
  int mismatches = 0, cases = 0;
  for (const auto& c : corpus.at("cases")) {
    std::string cmd = "cd '" + golden + "' && '" + cli + "'";
    for (const auto& a : c.at("args")) cmd += " '" + a.get<std::string>() + "'";
    cmd += " --out /dev/null 2>/dev/null";
    const int status = std::system(cmd.c_str());
    const int rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    ++cases;
    if (rc != c.at("exit").get<int>()) {
      ++mismatches;
      std::cout << "    " << c.at("name").get<std::string>() << ": exit " << rc << ", expected " << c.at("exit") << "\n";
    }
  }
  const double t = seconds_since(t0);
  o.require(mismatches == 0, std::to_string(cases) + " corpus cases, " + std::to_string(mismatches) + " exit-code mismatches");
  o.require(t < 300.0, "wall time " + num(t) + " s < 300 s");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : EQUICHORD_CLI;
  const std::string golden = argc > 2 ? argv[2] : GOLDEN_DIR;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"parallel chords of homothetic ellipsoids", c1_parallel_ellipsoids},
      {"tangent chords of nested ellipses", c2_lemma_ellipse},
      {"concurrent chords of concentric balls", c3_concurrent_balls},
      {"sensitivity to a degree-4 perturbation", c4_sensitivity},
      {"supporting sections of concentric balls", c5_sections},
      {"sections through a point of a ball", c6_suss},
      {"planar shadow boundaries and revolution", c7_lemma2},
      {"planar shadow boundaries of ellipsoids", c8_blaschke},
      {"projected tangent chords of balls", c9_projection_tangent},
      {"projected equichordal point", c10_projection_equipoint},
      {"centrally symmetric planar bodies", c11_hammer},
      {"falsifier determinism and descent", c12_falsifier},
      {"golden corpus wall time", [&] { return c13_corpus(cli, golden); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failures;
    std::printf("%s  %2zu  %-44s %6.1fs  %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                seconds_since(t0), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
