#include "equichord/falsifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <regex>

#include "equichord/csv.hpp"
#include "equichord/errors.hpp"
#include "equichord/fitting.hpp"
#include "equichord/harmonics.hpp"
#include "equichord/parallel.hpp"

namespace equichord {

namespace {

constexpr double kPenalty = 10.0;
constexpr double kConverged = 1e-10;
constexpr double kCollapse = 1e-12;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const Ellipsoid kBaseEllipsoid = Ellipsoid::diagonal(Vec3(0.25, 1.0, 1.0));

std::string canonical_target(const std::string& t) { return t == "conj-2.3" ? "conj-2.3-hypothesis" : t; }

bool needs_inner(const std::string& t) {
  return t != "suss" && t != "projection-equipoint" && t != "conj-6.3";
}

bool planar_target(const std::string& t) { return t == "conj-2.2"; }

double uniform(std::mt19937_64& rng, double lo, double hi) {
  // 53 raw bits; std::uniform_real_distribution is not portable bit-for-bit.
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1p-53;
}

// Central-symmetry defect of a planar body: the odd part of h beyond the
// translation (first harmonic), relative to the mean width.
double symmetry_defect(const Body& K) {
  constexpr int n = 512;
  std::vector<double> diff(n), width(n);
  double c1 = 0.0, s1 = 0.0;
  for (int j = 0; j < n; ++j) {
    const double t = 2.0 * kPi * j / n;
    const Vec3 u(std::cos(t), std::sin(t), 0.0);
    diff[j] = K.support(u) - K.support(-u);
    width[j] = K.support(u) + K.support(-u);
    c1 += diff[j] * std::cos(t);
    s1 += diff[j] * std::sin(t);
  }
  c1 *= 2.0 / n;
  s1 *= 2.0 / n;
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    const double t = 2.0 * kPi * j / n;
    worst = std::max(worst, std::abs(diff[j] - c1 * std::cos(t) - s1 * std::sin(t)));
  }
  return worst / (std::accumulate(width.begin(), width.end(), 0.0) / n);
}

double body_penalty(const Body& b) {
  const auto& v = b.validation();
  double mag = 0.0;
  for (const auto& viol : v.violations) mag += std::abs(viol.worst_margin);
  if (!v.valid) return kPenalty + mag;
  if (!v.strictly_convex) return kPenalty + std::max(0.0, 1e-9 - v.min_curvature);
  return 0.0;
}

}  // namespace

// ---- family ----------------------------------------------------------------

Family Family::parse(const std::string& text) {
  static const std::regex re(R"(^\s*(fourier2d|sh3d|ellipsoid\+sh(?:-perturbation)?)\((\d+)\)\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re))
    fail(ErrorKind::InvalidArgument, "family must be fourier2d(N), sh3d(N) or ellipsoid+sh(N), got '" + text + "'");
  Family f;
  f.degree = std::stoi(m[2].str());
  const std::string name = m[1].str();
  if (name == "fourier2d") {
    f.kind = FamilyKind::Fourier2D;
    require(f.degree >= 1 && f.degree <= 16, "fourier2d degree must be in 1..16");
  } else if (name == "sh3d") {
    f.kind = FamilyKind::SH3D;
    require(f.degree >= 1 && f.degree <= 8, "sh3d degree must be in 1..8");
  } else {
    f.kind = FamilyKind::EllipsoidSH;
    require(f.degree >= 2 && f.degree <= 8, "ellipsoid+sh degree must be in 2..8");
  }
  return f;
}

std::string Family::to_string() const {
  switch (kind) {
    case FamilyKind::Fourier2D: return "fourier2d(" + std::to_string(degree) + ")";
    case FamilyKind::SH3D: return "sh3d(" + std::to_string(degree) + ")";
    case FamilyKind::EllipsoidSH: return "ellipsoid+sh(" + std::to_string(degree) + ")";
  }
  return {};
}

int Family::parameter_count() const {
  switch (kind) {
    case FamilyKind::Fourier2D: return 2 * degree;
    case FamilyKind::SH3D: return sh_count(degree) - 1;
    case FamilyKind::EllipsoidSH: return sh_count(degree) - 4;
  }
  return 0;
}

Body Family::decode(const std::vector<double>& params) const {
  require(static_cast<int>(params.size()) == parameter_count(), "parameter vector has the wrong size");
  switch (kind) {
    case FamilyKind::Fourier2D: {
      FourierBody2D f;
      f.a0 = 1.0;
      for (int k = 0; k < degree; ++k) f.coeffs.push_back({params[2 * k], params[2 * k + 1]});
      return Body(f);
    }
    case FamilyKind::SH3D: {
      HarmonicBody3D s = HarmonicBody3D::zeros(degree);
      s.coeffs[0] = std::sqrt(4.0 * kPi);
      std::copy(params.begin(), params.end(), s.coeffs.begin() + 1);
      return Body(s);
    }
    case FamilyKind::EllipsoidSH: {
      HarmonicBody3D s = HarmonicBody3D::zeros(degree);
      s.base = kBaseEllipsoid;
      std::copy(params.begin(), params.end(), s.coeffs.begin() + 4);
      return Body(s);
    }
  }
  fail(ErrorKind::InvalidArgument, "unknown family");
}

Body Family::base() const {
  return decode(std::vector<double>(static_cast<std::size_t>(parameter_count()), 0.0));
}

Coupling parse_coupling(const std::string& s) {
  if (s == "fixed") return Coupling::Fixed;
  if (s == "homothet") return Coupling::Homothet;
  if (s == "independent") return Coupling::Independent;
  fail(ErrorKind::InvalidArgument, "coupling must be fixed, homothet or independent");
}

const char* to_string(Coupling c) {
  switch (c) {
    case Coupling::Fixed: return "fixed";
    case Coupling::Homothet: return "homothet";
    case Coupling::Independent: return "independent";
  }
  return "";
}

// ---- config and trace ------------------------------------------------------

CheckConfig SearchConfig::default_check() {
  CheckConfig c;
  c.directions = 8;
  c.tangents = 16;
  c.apexes = 6;
  c.section_planes = 4;
  c.section_samples = 64;
  c.planes = 16;
  c.fit_samples = 128;
  c.shadow_samples = 32;
  c.axis_planes = 4;
  c.axis_points = 32;
  c.exec = Exec::Serial;
  return c;
}

nlohmann::json SearchConfig::to_json() const {
  return {{"target", target},
          {"family", family.to_string()},
          {"coupling", to_string(coupling)},
          {"budget", budget},
          {"seed", seed},
          {"restarts", restarts},
          {"initial_scale", initial_scale},
          {"initial_step", initial_step},
          {"restart_shrink", restart_shrink},
          {"fixed_L", L ? L->kind() : std::string("default")},
          {"check", check.to_json()}};
}

nlohmann::json SearchTrace::to_json() const {
  auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
  nlohmann::json its = nlohmann::json::array();
  for (const auto& it : iterates)
    its.push_back({{"evaluation", it.evaluation},
                   {"restart", it.restart},
                   {"parameters", it.parameters},
                   {"residual", num(it.residual)},
                   {"structure_distance", num(it.structure_distance)},
                   {"penalized", it.penalized}});
  nlohmann::json out{{"config", config},
                     {"iterates", its},
                     {"evaluations", evaluations},
                     {"termination", termination},
                     {"alarm", {{"raised", alarm}, {"reason", alarm_reason}}}};
  if (!iterates.empty()) out["best"] = its.back();
  return out;
}

std::string SearchTrace::to_csv() const {
  std::vector<std::vector<double>> rows;
  for (const auto& it : iterates)
    rows.push_back({static_cast<double>(it.evaluation), it.residual, it.structure_distance});
  return csv_table({"iteration", "residual", "structure_distance"}, rows);
}

const std::vector<std::string>& search_targets() {
  static const std::vector<std::string> ids{"parallel",           "concurrent",        "concurrent-slab",
                                            "sections-parallel",  "sections-concurrent", "suss",
                                            "projection-tangent", "projection-equipoint", "conj-2.2",
                                            "conj-2.3",           "conj-6.2",          "conj-6.3"};
  return ids;
}

// ---- objective -------------------------------------------------------------

double residual(const std::string& target, const CheckInputs& in, const CheckConfig& cfg, bool* penalized) {
  if (penalized) *penalized = true;
  double pen = body_penalty(in.K);
  if (in.L) pen = std::max(pen, body_penalty(*in.L));
  if (pen > 0.0) return pen;
  if (in.L) {
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& u : body_grid(in.K, 256)) margin = std::min(margin, in.K.support(u.vec()) - in.L->support(u.vec()));
    if (!(margin > 0.0)) return kPenalty - margin;
  }
  CheckInputs local = in;
  const std::string id = canonical_target(target);
  if ((id == "concurrent" || id == "sections-concurrent") && !local.M)
    local.M = Body(Ellipsoid::ball(2.0 * in.K.radius(), in.K.anchor()));
  if (!needs_inner(id) && !local.p) local.p = in.K.anchor();
  CheckConfig c = cfg;
  c.hypothesis_only = true;
  try {
    const double r = run_check(id, local, c).hypothesis_residual;
    if (!std::isfinite(r)) return kPenalty;
    if (penalized) *penalized = false;
    return r;
  } catch (const GeometryError&) {
    return kPenalty;
  }
}

double structure_distance(const std::string& target, const Body& K, const std::optional<Body>& L, int fit_samples) {
  const std::string id = canonical_target(target);
  try {
    if (planar_target(id)) return symmetry_defect(K);
    const QuadricFit fk = fit_body(K, fit_samples);
    if (id == "parallel" || id == "conj-6.2") {
      if (!L) return fk.rms_residual;
      const QuadricFit fl = fit_body(*L, fit_samples);
      return std::max({fk.rms_residual, fl.rms_residual, homothety_test(fk, fl).residual});
    }
    double d = std::max(fk.rms_residual, isotropy_residual(fk));
    if (L && needs_inner(id)) {
      const QuadricFit fl = fit_body(*L, fit_samples);
      d = std::max({d, fl.rms_residual, isotropy_residual(fl), (fk.center - fl.center).norm() / (2.0 * K.radius())});
    }
    return d;
  } catch (const GeometryError&) {
    return std::numeric_limits<double>::infinity();
  }
}

// ---- search ----------------------------------------------------------------

namespace {

using Point = std::vector<double>;

class Search {
 public:
  explicit Search(const SearchConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
    target_ = canonical_target(cfg.target);
    inner_ = needs_inner(target_);
    nK_ = cfg.family.parameter_count();
    n_ = nK_;
    if (inner_ && cfg.coupling == Coupling::Homothet) n_ += 1;
    if (inner_ && cfg.coupling == Coupling::Independent) n_ += nK_;
    if (inner_ && cfg.coupling == Coupling::Fixed)
      fixed_L_ = cfg.L ? *cfg.L : cfg.family.base().homothet(0.5, Vec3::Zero());
    trace_.config = cfg.to_json();
  }

  SearchTrace run() {
    Point x0(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < nK_; ++i) x0[static_cast<std::size_t>(i)] = uniform(rng_, -cfg_.initial_scale, cfg_.initial_scale);
    if (inner_ && cfg_.coupling == Coupling::Independent)
      for (int i = nK_; i < n_; ++i)
        x0[static_cast<std::size_t>(i)] = uniform(rng_, -cfg_.initial_scale, cfg_.initial_scale);

    std::string reason = "step-collapse";
    double step = cfg_.initial_step;
    for (int r = 0; r <= cfg_.restarts; ++r) {
      restart_ = r;
      const long long remaining = cfg_.budget - trace_.evaluations;
      const long long share = r == cfg_.restarts ? remaining : std::max(1LL, remaining / (cfg_.restarts + 1 - r));
      const long long end = trace_.evaluations + share;
      // The simplex gets most of the share; the polish takes the rest.
      cap_ = trace_.evaluations + std::max(1LL, share * 3 / 4);
      nelder_mead(r == 0 ? x0 : best_x_, step);
      cap_ = end;
      if (!stopped()) polish(best_x_, 0.1 * step);
      if (converged()) {
        reason = "converged";
        break;
      }
      if (trace_.evaluations >= cfg_.budget) {
        reason = "budget";
        break;
      }
      step *= cfg_.restart_shrink;
    }
    trace_.termination = reason;

    const Iterate& best = trace_.best();
    if ((target_ == "parallel" || target_ == "concurrent" || target_ == "concurrent-slab") && best.residual < 1e-8 &&
        best.structure_distance > 1e-2) {
      trace_.alarm = true;
      trace_.alarm_reason = "potential counterexample: residual " + format_number(best.residual) +
                            " with structure distance " + format_number(best.structure_distance);
    }
    return std::move(trace_);
  }

 private:
  struct Bodies {
    std::optional<Body> K, L;
  };

  Bodies decode(const Point& x) const {
    Bodies b;
    const Point pk(x.begin(), x.begin() + nK_);
    b.K = cfg_.family.decode(pk);
    if (!inner_) return b;
    switch (cfg_.coupling) {
      case Coupling::Fixed: b.L = fixed_L_; break;
      case Coupling::Homothet: {
        const double ratio = 0.5 + x[static_cast<std::size_t>(nK_)];
        if (ratio < 0.05 || ratio > 0.95) return b;  // L left empty: out of range
        b.L = b.K->homothet(ratio, Vec3::Zero());
        break;
      }
      case Coupling::Independent:
        b.L = cfg_.family.decode(Point(x.begin() + nK_, x.end())).homothet(0.5, Vec3::Zero());
        break;
    }
    return b;
  }

  std::pair<double, bool> objective(const Point& x) const {
    try {
      const Bodies b = decode(x);
      if (inner_ && !b.L) {
        const double ratio = 0.5 + x[static_cast<std::size_t>(nK_)];
        return {kPenalty + std::max(0.05 - ratio, ratio - 0.95), true};
      }
      CheckInputs in{*b.K, b.L, cfg_.M, cfg_.p};
      bool pen = false;
      const double r = residual(target_, in, cfg_.check, &pen);
      return {r, pen};
    } catch (const GeometryError&) {
      return {kPenalty, true};
    }
  }

  bool converged() const { return !trace_.iterates.empty() && trace_.best().residual < kConverged; }
  bool stopped() const { return converged() || trace_.evaluations >= cap_; }

  // Evaluates in parallel, then accounts for the results in index order.
  std::vector<double> evaluate(const std::vector<Point>& xs) {
    const auto room = static_cast<std::size_t>(std::max<long long>(0, cap_ - trace_.evaluations));
    const std::size_t n = std::min(xs.size(), room);
    const auto values = map_indices<std::pair<double, bool>>(n, [&](std::size_t i) { return objective(xs[i]); },
                                                             cfg_.check.exec == Exec::Parallel ? Exec::Parallel
                                                                                               : Exec::Serial);
    std::vector<double> out(xs.size(), std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
      ++trace_.evaluations;
      out[i] = values[i].first;
      if (trace_.iterates.empty() || out[i] < trace_.best().residual) record(xs[i], values[i]);
    }
    return out;
  }

  double evaluate(const Point& x) { return evaluate(std::vector<Point>{x})[0]; }

  void record(const Point& x, std::pair<double, bool> value) {
    Iterate it;
    it.evaluation = trace_.evaluations;
    it.restart = restart_;
    it.parameters = x;
    it.residual = value.first;
    it.penalized = value.second;
    it.structure_distance = kNaN;
    if (!value.second) {
      const Bodies b = decode(x);
      it.structure_distance = structure_distance(target_, *b.K, b.L, cfg_.check.fit_samples);
    }
    best_x_ = x;
    trace_.iterates.push_back(std::move(it));
  }

  void nelder_mead(const Point& x0, double step) {
    const auto n = static_cast<std::size_t>(n_);
    std::vector<Point> simplex{x0};
    for (std::size_t i = 0; i < n; ++i) {
      Point v = x0;
      v[i] += step;
      simplex.push_back(std::move(v));
    }
    std::vector<double> f = evaluate(simplex);
    std::vector<std::size_t> order(n + 1);

    auto lerp = [](const Point& a, const Point& b, double t) {  // a + t (b - a)
      Point out(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + t * (b[i] - a[i]);
      return out;
    };

    while (!stopped()) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
      const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

      double diameter = 0.0;
      for (const auto& v : simplex)
        for (std::size_t i = 0; i < n; ++i) diameter = std::max(diameter, std::abs(v[i] - simplex[best][i]));
      if (diameter < kCollapse) return;

      Point centroid(n, 0.0);
      for (std::size_t k = 0; k <= n; ++k)
        if (k != worst)
          for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[k][i] / static_cast<double>(n);

      const Point xr = lerp(centroid, simplex[worst], -1.0);
      const double fr = evaluate(xr);
      if (fr < f[best]) {
        const Point xe = lerp(centroid, simplex[worst], -2.0);
        const double fe = evaluate(xe);
        if (fe < fr) {
          simplex[worst] = xe, f[worst] = fe;
        } else {
          simplex[worst] = xr, f[worst] = fr;
        }
        continue;
      }
      if (fr < f[second]) {
        simplex[worst] = xr, f[worst] = fr;
        continue;
      }
      const bool outside = fr < f[worst];
      const Point xc = outside ? lerp(centroid, xr, 0.5) : lerp(centroid, simplex[worst], 0.5);
      const double fc = evaluate(xc);
      if (outside ? fc <= fr : fc < f[worst]) {
        simplex[worst] = xc, f[worst] = fc;
        continue;
      }
      // Shrink toward the best vertex.
      std::vector<Point> moved;
      std::vector<std::size_t> idx;
      for (std::size_t k = 0; k <= n; ++k) {
        if (k == best) continue;
        simplex[k] = lerp(simplex[best], simplex[k], 0.5);
        moved.push_back(simplex[k]);
        idx.push_back(k);
      }
      const auto fs = evaluate(moved);
      for (std::size_t k = 0; k < idx.size(); ++k) f[idx[k]] = fs[k];
    }
  }

  // Coordinate perturbation around the best point with a halving step.
  void polish(Point x, double delta) {
    double fx = trace_.best().residual;
    while (delta >= kCollapse && !stopped()) {
      bool improved = false;
      for (std::size_t i = 0; i < x.size() && !stopped(); ++i) {
        for (double sgn : {1.0, -1.0}) {
          Point y = x;
          y[i] += sgn * delta;
          const double fy = evaluate(y);
          if (fy < fx) {
            x = std::move(y), fx = fy, improved = true;
            break;
          }
        }
      }
      if (!improved) delta *= 0.5;
    }
  }

  const SearchConfig& cfg_;
  std::mt19937_64 rng_;
  std::string target_;
  bool inner_ = true;
  int nK_ = 0, n_ = 0;
  std::optional<Body> fixed_L_;
  SearchTrace trace_;
  Point best_x_;
  int restart_ = 0;
  long long cap_ = 0;
};

}  // namespace

SearchTrace search(const SearchConfig& cfg) {
  require(cfg.budget >= 1, "search budget must be >= 1");
  require(cfg.restarts >= 0, "restart count must be >= 0");
  require(cfg.initial_step > 0.0 && cfg.initial_scale >= 0.0, "search step sizes must be positive");
  require(cfg.restart_shrink > 0.0 && cfg.restart_shrink <= 1.0, "restart shrink must be in (0, 1]");
  const auto& ids = search_targets();
  if (std::find(ids.begin(), ids.end(), cfg.target) == ids.end())
    fail(ErrorKind::InvalidArgument, "unsupported search target '" + cfg.target + "'");
  if (planar_target(cfg.target) != (cfg.family.dim() == 2))
    fail(ErrorKind::InvalidArgument, "family " + cfg.family.to_string() + " does not fit target " + cfg.target);
  if (cfg.L && cfg.L->dim() != cfg.family.dim())
    fail(ErrorKind::InvalidArgument, "fixed L must have the family's dimension");
  return Search(cfg).run();
}

}  // namespace equichord
