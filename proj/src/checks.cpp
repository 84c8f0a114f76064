#include "equichord/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "equichord/chords.hpp"
#include "equichord/fitting.hpp"
#include "equichord/planar.hpp"
#include "equichord/shadow.hpp"

namespace equichord {

namespace {

constexpr const char* kSmoothness = "bodies restricted to smooth strictly convex support representations";

struct Context {
  const CheckInputs& in;
  const CheckConfig& cfg;
  CheckReport& r;
};

const Body& need(const std::optional<Body>& b, const char* name, const std::string& id) {
  if (!b) fail(ErrorKind::InvalidArgument, "check '" + id + "' needs body " + name);
  return *b;
}

Vec3 need_point(const std::optional<Vec3>& p, const std::string& id) {
  if (!p) fail(ErrorKind::InvalidArgument, "check '" + id + "' needs a point p");
  return *p;
}

void need_valid(const Body& b, const char* name, int dim) {
  const auto& v = b.validation();
  if (!v.valid) {
    std::string what = std::string("body ") + name + " fails validation:";
    for (const auto& viol : v.violations) what += " " + viol.invariant + ";";
    fail(ErrorKind::InvalidArgument, what);
  }
  if (!v.strictly_convex) fail(ErrorKind::UnsupportedBody, std::string("body ") + name + " is not strictly convex");
  if (b.dim() != dim)
    fail(ErrorKind::InvalidArgument, std::string("body ") + name + " must be " + std::to_string(dim) + "-dimensional");
}

void need_inside(const Body& outer, const Body& inner) {
  if (!contains_body(outer, inner, 0.0))
    fail(ErrorKind::InconsistentContainment, "inner body L is not contained in K");
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

// Ball-ness of K and L plus concentricity, each reported separately.
double ball_conclusion(const Body& K, const Body* L, const CheckConfig& cfg, CheckReport& r) {
  const double diameter = 2.0 * K.radius();
  const QuadricFit fk = fit_body(K, cfg.fit_samples);
  r.metrics["fit_rms_K"] = fk.rms_residual;
  r.metrics["isotropy_K"] = isotropy_residual(fk);
  r.metrics["radius_K"] = ball_radius(fk);
  double res = std::max(fk.rms_residual, isotropy_residual(fk));
  if (L) {
    const QuadricFit fl = fit_body(*L, cfg.fit_samples);
    r.metrics["fit_rms_L"] = fl.rms_residual;
    r.metrics["isotropy_L"] = isotropy_residual(fl);
    r.metrics["radius_L"] = ball_radius(fl);
    r.metrics["concentricity"] = (fk.center - fl.center).norm() / diameter;
    res = std::max({res, fl.rms_residual, isotropy_residual(fl), r.metrics["concentricity"]});
  }
  r.samples["fit_samples"] = cfg.fit_samples;
  return res;
}

// Homothetic concentric ellipsoids (or ellipses).
double ellipsoid_conclusion(const Body& K, const Body& L, const CheckConfig& cfg, CheckReport& r) {
  const QuadricFit fk = fit_body(K, cfg.fit_samples);
  const QuadricFit fl = fit_body(L, cfg.fit_samples);
  const Homothety h = homothety_test(fk, fl);
  r.metrics["fit_rms_K"] = fk.rms_residual;
  r.metrics["fit_rms_L"] = fl.rms_residual;
  r.metrics["homothety_ratio"] = h.ratio;
  r.metrics["homothety_residual"] = h.residual;
  r.samples["fit_samples"] = cfg.fit_samples;
  return std::max({fk.rms_residual, fl.rms_residual, h.residual});
}

void note_lengths(CheckReport& r, const std::vector<ChordProfile>& profiles, const char* prefix) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  std::size_t grazing = 0;
  for (const auto& p : profiles) {
    if (!p.lengths.empty()) {
      lo = std::min(lo, p.min);
      hi = std::max(hi, p.max);
    }
    grazing += p.grazing;
  }
  r.metrics[std::string(prefix) + "_min"] = lo;
  r.metrics[std::string(prefix) + "_max"] = hi;
  if (grazing > 0) r.warnings.push_back(std::to_string(grazing) + " grazing chords excluded");
}

std::vector<Vec3> apex_samples(const Context& c, const Body& K) {
  std::vector<Vec3> apexes;
  if (c.cfg.slab) {
    const Slab& s = *c.cfg.slab;
    const Direction n(s.normal);
    const auto [e1, e2] = orthonormal_complement(n.vec());
    const int per_plane = std::max(1, c.cfg.apexes / 2);
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (double offset : {s.offset1, s.offset2}) {
      const Vec3 center = Plane{n, offset}.project(K.anchor());
      for (int i = 0; i < per_plane; ++i) {
        const double rad = 1.5 * K.radius() * std::sqrt((i + 0.5) / per_plane);
        apexes.push_back(center + rad * (std::cos(golden * i) * e1 + std::sin(golden * i) * e2));
      }
    }
    c.r.config["slab"] = {{"normal", {n[0], n[1], n[2]}}, {"offset1", s.offset1}, {"offset2", s.offset2}};
  } else {
    const Body& M = need(c.in.M, "M", c.r.check_id);
    need_valid(M, "M", 3);
    if (!contains_body(M, K, 0.0)) fail(ErrorKind::InconsistentContainment, "K is not contained in M");
    for (const auto& u : sphere_grid(c.cfg.apexes)) apexes.push_back(M.boundary_point(u.vec()));
  }
  for (const auto& x : apexes)
    if (!(K.membership(x) > 0.0)) fail(ErrorKind::InconsistentContainment, "an apex lies inside K");
  c.r.samples["apexes"] = static_cast<long long>(apexes.size());
  return apexes;
}

// ---------------------------------------------------------------------------

void check_parallel(Context c) {
  const Body& K = c.in.K;
  const Body& L = need(c.in.L, "L", c.r.check_id);
  need_valid(K, "K", 3);
  need_valid(L, "L", 3);
  need_inside(K, L);
  const auto dirs = sphere_grid(c.cfg.directions);
  const auto profiles = map_indices<ChordProfile>(
      dirs.size(), [&](std::size_t i) { return parallel_chord_profile(K, L, dirs[i], c.cfg.tangents, Exec::Serial); },
      c.cfg.exec);
  std::vector<double> spreads;
  for (const auto& p : profiles) spreads.push_back(p.relative_spread);
  c.r.hypothesis_residual = max_of(spreads);
  note_lengths(c.r, profiles, "chord");
  c.r.samples["directions"] = c.cfg.directions;
  c.r.samples["tangents"] = c.cfg.tangents;
  if (!c.cfg.hypothesis_only) c.r.conclusion_residual = ellipsoid_conclusion(K, L, c.cfg, c.r);
}

void check_planar_symmetric(Context c) {
  const Body& K = c.in.K;
  const Body& L = need(c.in.L, "L", c.r.check_id);
  need_valid(K, "K", 2);
  need_valid(L, "L", 2);
  need_inside(K, L);
  const int m = c.cfg.tangents + (c.cfg.tangents % 2);
  const Vec3 center = K.anchor();
  const double diameter = 2.0 * K.radius();
  double defect = 0.0;
  for (const auto& v : circle_grid(m)) {
    for (const Body* b : {&K, &L}) {
      const Vec3 mid = 0.5 * (b->boundary_point(v.vec()) + b->boundary_point(-v.vec()));
      defect = std::max(defect, (mid - center).norm() / diameter);
    }
  }
  c.r.hypothesis_residual = defect;
  c.r.metrics["symmetry_defect"] = defect;
  const ChordProfile p = planar_chord_profile(K, L, m, c.cfg.exec);
  double mismatch = 0.0;
  if (p.lengths.size() == static_cast<std::size_t>(m)) {
    for (int j = 0; j < m / 2; ++j)
      mismatch = std::max(mismatch, std::abs(p.lengths[static_cast<std::size_t>(j)] -
                                             p.lengths[static_cast<std::size_t>(j + m / 2)]) / p.mean);
  } else {
    c.r.warnings.push_back("grazing tangent chords excluded; opposite pairs not compared");
    mismatch = std::numeric_limits<double>::infinity();
  }
  c.r.metrics["opposite_chord_mismatch"] = mismatch;
  c.r.samples["tangents"] = m;
  c.r.conclusion_residual = mismatch;
}

void check_lemma_ellipse(Context c) {
  const Body& K = c.in.K;
  const Body& L = need(c.in.L, "L", c.r.check_id);
  need_valid(K, "K", 2);
  need_valid(L, "L", 2);
  need_inside(K, L);
  c.r.hypothesis_residual = ellipsoid_conclusion(K, L, c.cfg, c.r);
  const int m = c.cfg.tangents + (c.cfg.tangents % 2);
  c.r.samples["tangents"] = m;
  if (c.cfg.hypothesis_only) return;

  const ChordProfile p = planar_chord_profile(K, L, m, c.cfg.exec);
  if (p.lengths.size() != static_cast<std::size_t>(m)) fail(ErrorKind::InconsistentContainment, "grazing tangent chords");
  const QuadricFit fk = fit_body(K, c.cfg.fit_samples);
  Eigen::SelfAdjointEigenSolver<Mat2> es(fk.raw.topLeftCorner<2, 2>());
  const Vec2 major = es.eigenvectors().col(0);  // smallest eigenvalue of A: longest axis
  const double major_angle = std::atan2(major.y(), major.x());
  if (es.eigenvalues()(1) < 1.0001 * es.eigenvalues()(0))
    c.r.warnings.push_back("K is (nearly) a disc; the major axis is not determined");

  const double step = 2.0 * kPi / m;
  auto angular_gap = [](double a, double b) {  // distance modulo pi
    const double d = std::fmod(std::abs(a - b), kPi);
    return std::min(d, kPi - d);
  };
  // Grid minimizers must sit on the normals parallel to the major axis.
  double argmin_error = 0.0;
  std::vector<std::size_t> minimizers;
  for (std::size_t j = 0; j < p.lengths.size(); ++j)
    if (p.lengths[j] <= p.min * (1.0 + 1e-12)) minimizers.push_back(j);
  for (std::size_t j : minimizers) argmin_error = std::max(argmin_error, angular_gap(p.parameters[j], major_angle));
  // Strict growth away from the minimizer on both sides, up to the maximum.
  const auto n = p.lengths.size();
  const std::size_t j0 = static_cast<std::size_t>(std::llround(std::fmod(major_angle + 2.0 * kPi, 2.0 * kPi) / step)) % n;
  long violations = 0;
  for (std::size_t start : {j0, (j0 + n / 2) % n}) {
    for (int dir : {+1, -1}) {
      bool rising = true;
      for (std::size_t k = 0; k < n / 2; ++k) {
        const std::size_t a = (start + n + dir * static_cast<long>(k)) % n;
        const std::size_t b = (start + n + dir * static_cast<long>(k + 1)) % n;
        const bool up = p.lengths[b] > p.lengths[a];
        if (rising && !up) {
          rising = false;
          if (k < n / 4 - 1) ++violations;  // turned before the quarter point
          continue;
        }
        if (!rising && up) ++violations;
        if (k + 1 >= n / 4) break;
      }
    }
  }
  c.r.metrics["min_length"] = p.min;
  c.r.metrics["max_length"] = p.max;
  c.r.metrics["argmin_angle_error"] = argmin_error;
  c.r.metrics["major_axis_angle"] = major_angle;
  c.r.metrics["minimizer_count"] = static_cast<double>(minimizers.size());
  c.r.metrics["monotonicity_violations"] = static_cast<double>(violations);
  c.r.flags["strict_monotone"] = violations == 0;
  c.r.conclusion_residual = std::max(0.0, argmin_error - step) + static_cast<double>(violations);
}

void check_concurrent(Context c) {
  const Body& K = c.in.K;
  const Body& L = need(c.in.L, "L", c.r.check_id);
  need_valid(K, "K", 3);
  need_valid(L, "L", 3);
  need_inside(K, L);
  const auto apexes = apex_samples(c, K);
  const auto profiles = map_indices<ChordProfile>(
      apexes.size(),
      [&](std::size_t i) { return concurrent_chord_profile(K, L, apexes[i], c.cfg.tangents, Exec::Serial); },
      c.cfg.exec);
  std::vector<double> spreads;
  for (const auto& p : profiles) spreads.push_back(p.relative_spread);
  c.r.hypothesis_residual = max_of(spreads);
  note_lengths(c.r, profiles, "chord");
  c.r.samples["rulings"] = c.cfg.tangents;
  c.r.assumptions.push_back("finitely many apexes sampled; worst spread reported");
  if (!c.cfg.hypothesis_only) c.r.conclusion_residual = ball_conclusion(K, &L, c.cfg, c.r);
}

// Width statistics of sections of K by a list of (plane, anchor hint).
struct SectionGroup {
  std::vector<std::pair<Plane, Vec3>> planes;
};

void section_widths(Context c, const Body& K, const std::vector<SectionGroup>& groups) {
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t g = 0; g < groups.size(); ++g)
    for (std::size_t k = 0; k < groups[g].planes.size(); ++k) jobs.emplace_back(g, k);
  const auto widths = map_indices<ChordProfile>(
      jobs.size(),
      [&](std::size_t i) {
        const auto& [plane, hint] = groups[jobs[i].first].planes[jobs[i].second];
        return width_profile(section(K, plane, c.cfg.section_samples, hint, Exec::Serial));
      },
      c.cfg.exec);
  double within = 0.0, across = 0.0, lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  std::size_t i = 0;
  for (const auto& g : groups) {
    std::vector<double> means;
    for (std::size_t k = 0; k < g.planes.size(); ++k, ++i) {
      within = std::max(within, widths[i].relative_spread);
      lo = std::min(lo, widths[i].min);
      hi = std::max(hi, widths[i].max);
      means.push_back(widths[i].mean);
    }
    across = std::max(across, relative_spread(means));
  }
  c.r.metrics["width_within_spread"] = within;
  c.r.metrics["width_across_spread"] = across;
  c.r.metrics["width_min"] = lo;
  c.r.metrics["width_max"] = hi;
  c.r.samples["sections"] = static_cast<long long>(jobs.size());
  c.r.samples["section_samples"] = c.cfg.section_samples;
  c.r.hypothesis_residual = std::max(within, across);
}

void check_sections_parallel(Context c) {
  const Body& K = c.in.K;
  const Body& L = need(c.in.L, "L", c.r.check_id);
  need_valid(K, "K", 3);
  need_valid(L, "L", 3);
  need_inside(K, L);
  std::vector<SectionGroup> groups;
  for (const auto& u : sphere_grid(c.cfg.directions)) {
    SectionGroup g;
    for (const Plane& pl : supporting_planes_parallel(L, u, c.cfg.section_planes))
      g.planes.emplace_back(pl, L.boundary_point(pl.normal.vec()));
    groups.push_back(std::move(g));
  }
  c.r.samples["directions"] = c.cfg.directions;
  c.r.samples["planes_per_direction"] = c.cfg.section_planes;
  section_widths(c, K, groups);
  if (!c.cfg.hypothesis_only) c.r.conclusion_residual = ball_conclusion(K, &L, c.cfg, c.r);
}

void check_sections_concurrent(Context c) {
  const Body& K = c.in.K;
  const Body& L = need(c.in.L, "L", c.r.check_id);
  need_valid(K, "K", 3);
  need_valid(L, "L", 3);
  need_inside(K, L);
  std::vector<SectionGroup> groups;
  for (const Vec3& x : apex_samples(c, K)) {
    SectionGroup g;
    for (const Plane& pl : supporting_planes_through(L, x, c.cfg.section_planes))
      g.planes.emplace_back(pl, L.boundary_point(pl.normal.vec()));
    groups.push_back(std::move(g));
  }
  c.r.samples["planes_per_apex"] = c.cfg.section_planes;
  c.r.assumptions.push_back("only planes through x that genuinely support L are generated");
  section_widths(c, K, groups);
  if (!c.cfg.hypothesis_only) c.r.conclusion_residual = ball_conclusion(K, &L, c.cfg, c.r);
}

void check_suss(Context c) {
  const Body& K = c.in.K;
  need_valid(K, "K", 3);
  const Vec3 p = need_point(c.in.p, c.r.check_id);
  if (!(K.membership(p) < 0.0)) fail(ErrorKind::InvalidArgument, "p must be interior to K");
  SectionGroup g;
  for (const auto& n : sphere_grid(c.cfg.planes)) g.planes.emplace_back(Plane::through(p, n), p);
  c.r.samples["planes"] = c.cfg.planes;
  section_widths(c, K, {g});
  if (c.cfg.hypothesis_only) return;
  const double diameter = 2.0 * K.radius();
  const QuadricFit fk = fit_body(K, c.cfg.fit_samples);
  const double width = 0.5 * (c.r.metrics["width_min"] + c.r.metrics["width_max"]);
  c.r.metrics["fit_rms_K"] = fk.rms_residual;
  c.r.metrics["isotropy_K"] = isotropy_residual(fk);
  c.r.metrics["center_offset"] = (fk.center - p).norm() / diameter;
  c.r.metrics["diameter_mismatch"] = std::abs(2.0 * ball_radius(fk) - width) / width;
  c.r.samples["fit_samples"] = c.cfg.fit_samples;
  c.r.conclusion_residual = std::max({fk.rms_residual, isotropy_residual(fk), c.r.metrics["center_offset"],
                                      c.r.metrics["diameter_mismatch"]});
}

void check_lemma2(Context c) {
  const Body& K = c.in.K;
  need_valid(K, "K", 3);
  const Direction v(c.cfg.axis.value_or(Vec3::UnitZ()));
  CheckReport sub = lemma2_check(K, v, c.cfg.directions, c.cfg.shadow_samples, c.cfg.axis_planes, c.cfg.axis_points,
                                 c.cfg.hypothesis_tol, c.cfg.conclusion_tol, c.cfg.exec);
  c.r.hypothesis_residual = sub.hypothesis_residual;
  c.r.conclusion_residual = sub.conclusion_residual;
  c.r.metrics = sub.metrics;
  for (const auto& [k, n] : sub.samples) c.r.samples[k] = n;
  c.r.config["axis"] = {v[0], v[1], v[2]};
  c.r.assumptions.push_back("shadow boundaries are closed planar curves for the strictly convex bodies admitted");
}

void check_projection_tangent(Context c) {
  const Body& K = c.in.K;
  const Body& L = need(c.in.L, "L", c.r.check_id);
  need_valid(K, "K", 3);
  need_valid(L, "L", 3);
  need_inside(K, L);
  const auto dirs = sphere_grid(c.cfg.directions);
  const auto profiles = map_indices<ChordProfile>(
      dirs.size(),
      [&](std::size_t i) {
        const PlanarBody pk = projection(K, dirs[i], 8, Exec::Serial);
        const PlanarBody pl = projection(L, dirs[i], 8, Exec::Serial);
        return planar_tangent_chords(pk, pl, c.cfg.tangents);
      },
      c.cfg.exec);
  std::vector<double> all;
  for (const auto& p : profiles) all.insert(all.end(), p.lengths.begin(), p.lengths.end());
  const ChordProfile s = summarize(all);
  c.r.hypothesis_residual = s.relative_spread;
  c.r.metrics["constant"] = s.mean;
  c.r.metrics["chord_min"] = s.min;
  c.r.metrics["chord_max"] = s.max;
  c.r.flags["unit_constant"] = std::abs(s.mean - 1.0) <= c.cfg.hypothesis_tol;
  c.r.samples["directions"] = c.cfg.directions;
  c.r.samples["tangents"] = c.cfg.tangents;
  if (!c.cfg.hypothesis_only) c.r.conclusion_residual = ball_conclusion(K, &L, c.cfg, c.r);
}

double projection_equichordal_spread(const Body& K, const Vec3& p, const CheckConfig& cfg) {
  const auto dirs = sphere_grid(cfg.directions);
  const auto spreads = map_indices<double>(
      dirs.size(),
      [&](std::size_t i) {
        const PlanarBody pk = projection(K, dirs[i], 8, Exec::Serial);
        return equichordal_test(pk, pk.frame.to_local(p), cfg.tangents).relative_spread;
      },
      cfg.exec);
  return max_of(spreads);
}

// Binormal of K through p: the chord [X(-v), X(v)] parallel to v and
// passing through p. Minimizes angle mismatch plus distance to p.
std::pair<Line, double> binormal_through(const Body& K, const Vec3& p) {
  const double diameter = 2.0 * K.radius();
  auto defect = [&](const Vec3& v) {
    const Vec3 a = K.boundary_point(-v), b = K.boundary_point(v);
    const Vec3 c = b - a;
    const double angle = std::acos(std::clamp(c.normalized().dot(v), -1.0, 1.0));
    return angle + Line{a, Direction(c)}.distance_to(p) / diameter;
  };
  Vec3 best = Vec3::UnitZ();
  double best_f = std::numeric_limits<double>::infinity();
  for (const auto& d : sphere_grid(512)) {
    if (d.vec().z() < 0.0) continue;  // v and -v give the same chord
    const double f = defect(d.vec());
    if (f < best_f) best_f = f, best = d.vec();
  }
  double step = 0.15;
  for (int level = 0; level < 40 && step > 1e-12; ++level) {
    const auto [e1, e2] = orthonormal_complement(best);
    bool moved = false;
    for (const Vec3& mv : {e1, Vec3(-e1), e2, Vec3(-e2)}) {
      const Vec3 cand = (best + step * mv).normalized();
      const double f = defect(cand);
      if (f < best_f) best_f = f, best = cand, moved = true;
    }
    if (!moved) step *= 0.5;
  }
  const Vec3 a = K.boundary_point(-best), b = K.boundary_point(best);
  return {Line{a, Direction(b - a)}, best_f};
}

void check_projection_equipoint(Context c) {
  const Body& K = c.in.K;
  need_valid(K, "K", 3);
  const Vec3 p = need_point(c.in.p, c.r.check_id);
  if (!(K.membership(p) < 0.0)) fail(ErrorKind::InvalidArgument, "p must be interior to K");
  const double proj = projection_equichordal_spread(K, p, c.cfg);
  std::vector<double> lengths;
  for (const auto& d : sphere_grid(c.cfg.directions)) {
    const auto fwd = K.exit_distance(p, d.vec());
    const auto bwd = K.exit_distance(p, -d.vec());
    lengths.push_back(fwd.value_or(0.0) + bwd.value_or(0.0));
  }
  const double own = relative_spread(lengths);
  c.r.metrics["projection_equichordal_spread"] = proj;
  c.r.metrics["equichordal_spread_3d"] = own;
  c.r.hypothesis_residual = std::max(proj, own);
  c.r.samples["directions"] = c.cfg.directions;
  c.r.samples["chords_per_projection"] = c.cfg.tangents;
  if (c.cfg.hypothesis_only) return;
  const auto [axis, binormal_defect] = binormal_through(K, p);
  const AxisReport ax = axis_of_revolution_test(K, axis, c.cfg.axis_planes, c.cfg.axis_points, c.cfg.exec);
  const double diameter = 2.0 * K.radius();
  c.r.metrics["binormal_defect"] = binormal_defect;
  c.r.metrics["axis_circle_residual"] = ax.circle_residual;
  c.r.metrics["axis_center_residual"] = ax.center_residual;
  c.r.samples["axis_planes"] = c.cfg.axis_planes;
  c.r.samples["axis_points"] = c.cfg.axis_points;
  c.r.conclusion_residual = std::max(ax.circle_residual, ax.center_residual) / diameter + binormal_defect;
}

// ---- conjecture hypotheses (no conclusion is proven) -----------------------

void check_conj22(Context c) {
  const Body& K = c.in.K;
  const Body& L = need(c.in.L, "L", c.r.check_id);
  need_valid(K, "K", 2);
  need_valid(L, "L", 2);
  need_inside(K, L);
  const int m = c.cfg.tangents + (c.cfg.tangents % 2);
  const ChordProfile p = planar_chord_profile(K, L, m, c.cfg.exec);
  if (p.lengths.size() != static_cast<std::size_t>(m)) fail(ErrorKind::InconsistentContainment, "grazing tangent chords");
  double mismatch = 0.0;
  for (int j = 0; j < m / 2; ++j)
    mismatch = std::max(mismatch, std::abs(p.lengths[static_cast<std::size_t>(j)] -
                                           p.lengths[static_cast<std::size_t>(j + m / 2)]) / p.mean);
  c.r.hypothesis_residual = mismatch;
  c.r.samples["tangents"] = m;
}

void check_conj23(Context c) {
  const Body& K = c.in.K;
  const Body& L = need(c.in.L, "L", c.r.check_id);
  need_valid(K, "K", 3);
  need_valid(L, "L", 3);
  need_inside(K, L);
  const auto normals = sphere_grid(c.cfg.directions);
  const auto spreads = map_indices<double>(
      normals.size(),
      [&](std::size_t i) {
        const Vec3 x = L.boundary_point(normals[i].vec());
        const PlanarBody s = section(K, Plane::through(x, normals[i]), 8, x, Exec::Serial);
        return equichordal_test(s, s.frame.to_local(x), c.cfg.tangents).relative_spread;
      },
      c.cfg.exec);
  c.r.hypothesis_residual = max_of(spreads);
  c.r.samples["contact_points"] = c.cfg.directions;
  c.r.samples["chords_per_section"] = c.cfg.tangents;
}

void check_conj62(Context c) {
  const Body& K = c.in.K;
  const Body& L = need(c.in.L, "L", c.r.check_id);
  need_valid(K, "K", 3);
  need_valid(L, "L", 3);
  need_inside(K, L);
  const auto ws = sphere_grid(c.cfg.directions);
  const int nu = std::max(1, c.cfg.tangents / 2);
  const auto spreads = map_indices<double>(
      ws.size(),
      [&](std::size_t i) {
        const Vec3& w = ws[i].vec();
        const auto [a1, a2] = orthonormal_complement(w);
        std::vector<double> lengths;
        for (int k = 0; k < nu; ++k) {
          const double psi = kPi * k / nu;
          const Vec3 u = std::cos(psi) * a1 + std::sin(psi) * a2;
          const Vec3 v = u.cross(w);
          for (const Vec3& n : {v, Vec3(-v)}) {
            const Vec3 touch = L.boundary_point(n);
            const auto fwd = K.shadow_exit_distance(touch, w, n);
            const auto bwd = K.shadow_exit_distance(touch, -w, n);
            if (!fwd || !bwd) fail(ErrorKind::InconsistentContainment, "projected tangent misses the projection of K");
            lengths.push_back(*fwd + *bwd);
          }
        }
        return relative_spread(lengths);
      },
      c.cfg.exec);
  c.r.hypothesis_residual = max_of(spreads);
  c.r.samples["chord_directions"] = c.cfg.directions;
  c.r.samples["projections_per_direction"] = nu;
}

void check_conj63(Context c) {
  const Body& K = c.in.K;
  need_valid(K, "K", 3);
  const Vec3 p = c.in.p.value_or(K.anchor());
  if (!(K.membership(p) < 0.0)) fail(ErrorKind::InvalidArgument, "p must be interior to K");
  c.r.hypothesis_residual = projection_equichordal_spread(K, p, c.cfg);
  c.r.samples["directions"] = c.cfg.directions;
  c.r.samples["chords_per_projection"] = c.cfg.tangents;
}

using CheckFn = void (*)(Context);

const std::map<std::string, std::pair<CheckFn, bool>>& registry() {
  static const std::map<std::string, std::pair<CheckFn, bool>> table{
      {"parallel", {check_parallel, false}},
      {"planar-symmetric", {check_planar_symmetric, false}},
      {"lemma-ellipse", {check_lemma_ellipse, false}},
      {"concurrent", {check_concurrent, false}},
      {"concurrent-slab", {check_concurrent, false}},
      {"sections-parallel", {check_sections_parallel, false}},
      {"sections-concurrent", {check_sections_concurrent, false}},
      {"suss", {check_suss, false}},
      {"lemma2", {check_lemma2, false}},
      {"projection-tangent", {check_projection_tangent, false}},
      {"projection-equipoint", {check_projection_equipoint, false}},
      {"conj-2.2", {check_conj22, true}},
      {"conj-2.3-hypothesis", {check_conj23, true}},
      {"conj-6.2", {check_conj62, true}},
      {"conj-6.3", {check_conj63, true}},
  };
  return table;
}

}  // namespace

nlohmann::json CheckConfig::to_json() const {
  nlohmann::json j{{"directions", directions},
                   {"tangents", tangents},
                   {"apexes", apexes},
                   {"section_planes", section_planes},
                   {"section_samples", section_samples},
                   {"planes", planes},
                   {"fit_samples", fit_samples},
                   {"shadow_samples", shadow_samples},
                   {"axis_planes", axis_planes},
                   {"axis_points", axis_points},
                   {"hypothesis_only", hypothesis_only}};
  return j;
}

const std::vector<std::string>& check_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& [k, v] : registry()) out.push_back(k);
    return out;
  }();
  return ids;
}

CheckReport run_check(const std::string& id, const CheckInputs& in, const CheckConfig& cfg) {
  const auto it = registry().find(id);
  if (it == registry().end()) fail(ErrorKind::InvalidArgument, "unknown check id '" + id + "'");
  require(cfg.directions >= 1 && cfg.tangents >= 1 && cfg.apexes >= 1 && cfg.section_planes >= 1 &&
              cfg.section_samples >= 4 && cfg.planes >= 1 && cfg.fit_samples >= 10 && cfg.shadow_samples >= 3 &&
              cfg.axis_planes >= 1 && cfg.axis_points >= 3,
          "check grid sizes out of range");
  require(cfg.hypothesis_tol > 0.0 && cfg.conclusion_tol > 0.0, "tolerances must be positive");
  CheckConfig local = cfg;
  if (id == "concurrent-slab" && !local.slab) local.slab = Slab{};
  if (id == "concurrent" && local.slab) fail(ErrorKind::InvalidArgument, "use concurrent-slab for slab apexes");
  local.hypothesis_only = cfg.hypothesis_only || it->second.second;

  CheckReport r;
  r.check_id = id;
  r.hypothesis_tol = local.hypothesis_tol;
  r.conclusion_tol = local.conclusion_tol;
  r.hypothesis_only = local.hypothesis_only;
  r.config = local.to_json();
  r.config["body_K"] = in.K.kind();
  if (in.L) r.config["body_L"] = in.L->kind();
  if (in.M) r.config["body_M"] = in.M->kind();
  if (in.p) r.config["p"] = {(*in.p)[0], (*in.p)[1], (*in.p)[2]};
  r.assumptions.push_back(kSmoothness);
  r.assumptions.push_back("residuals are sampled; no quantitative stability relation between them is asserted");
  it->second.first(Context{in, local, r});
  r.decide();
  return r;
}

}  // namespace equichord
