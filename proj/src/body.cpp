#include "equichord/body.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "equichord/harmonics.hpp"

namespace equichord {

namespace {

constexpr int kMembershipGrid = 512;
constexpr int kValidationGrid = 2048;
constexpr int kAnchorGrid = 256;
constexpr double kConvexityFloor = -1e-9;
constexpr double kStrictFloor = 1e-9;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Mat3 embed_planar(const Mat3& m) {
  Mat3 out = m;
  out(0, 2) = out(2, 0) = out(1, 2) = out(2, 1) = 0.0;
  out(2, 2) = 1.0;
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Representations

Ellipsoid Ellipsoid::ball(double radius, const Vec3& center) {
  return axes(Vec3::Constant(radius), center);
}

Ellipsoid Ellipsoid::disc(double radius, const Vec2& center) {
  return ellipse(radius, radius, center);
}

Ellipsoid Ellipsoid::axes(const Vec3& semi_axes, const Vec3& center) {
  Ellipsoid e;
  e.center = center;
  e.shape = semi_axes.cwiseProduct(semi_axes).cwiseInverse().asDiagonal();
  return e;
}

Ellipsoid Ellipsoid::ellipse(double a, double b, const Vec2& center) {
  Ellipsoid e = axes(Vec3(a, b, 1.0), Vec3(center.x(), center.y(), 0.0));
  e.dim = 2;
  return e;
}

Ellipsoid Ellipsoid::diagonal(const Vec3& shape_diagonal, const Vec3& center) {
  Ellipsoid e;
  e.center = center;
  e.shape = shape_diagonal.asDiagonal();
  return e;
}

double FourierBody2D::h(double theta) const {
  double v = a0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const double kk = static_cast<double>(k + 1);
    v += coeffs[k][0] * std::cos(kk * theta) + coeffs[k][1] * std::sin(kk * theta);
  }
  return v;
}

double FourierBody2D::dh(double theta) const {
  double v = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const double kk = static_cast<double>(k + 1);
    v += kk * (-coeffs[k][0] * std::sin(kk * theta) + coeffs[k][1] * std::cos(kk * theta));
  }
  return v;
}

double FourierBody2D::d2h(double theta) const {
  double v = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const double kk = static_cast<double>(k + 1);
    v -= kk * kk * (coeffs[k][0] * std::cos(kk * theta) + coeffs[k][1] * std::sin(kk * theta));
  }
  return v;
}

HarmonicBody3D HarmonicBody3D::zeros(int degree) {
  require(degree >= 0, "harmonic degree must be non-negative");
  HarmonicBody3D s;
  s.degree = degree;
  s.coeffs.assign(static_cast<std::size_t>(sh_count(degree)), 0.0);
  return s;
}

double& HarmonicBody3D::coeff(int l, int m) {
  require(l >= 0 && l <= degree && std::abs(m) <= l, "harmonic index out of range");
  return coeffs[static_cast<std::size_t>(sh_index(l, m))];
}

double HarmonicBody3D::coeff(int l, int m) const {
  require(l >= 0 && l <= degree && std::abs(m) <= l, "harmonic index out of range");
  return coeffs[static_cast<std::size_t>(sh_index(l, m))];
}

// ---------------------------------------------------------------------------
// Support evaluation per representation

namespace {

struct EllipsoidEval {
  Vec3 center;
  Mat3 inv;  // shape^-1

  double value(const Vec3& y) const { return center.dot(y) + std::sqrt(y.dot(inv * y)); }

  SupportJet jet(const Vec3& y) const {
    const Vec3 by = inv * y;
    const double s = std::sqrt(y.dot(by));
    SupportJet j;
    j.value = center.dot(y) + s;
    j.gradient = center + by / s;
    j.hessian = inv / s - (by * by.transpose()) / (s * s * s);
    return j;
  }
};

double fourier_value(const FourierBody2D& f, const Vec3& y) {
  const double rho = std::hypot(y.x(), y.y());
  return rho * f.h(std::atan2(y.y(), y.x()));
}

SupportJet fourier_jet(const FourierBody2D& f, const Vec3& y) {
  const double rho = std::hypot(y.x(), y.y());
  const double theta = std::atan2(y.y(), y.x());
  const Vec3 u(std::cos(theta), std::sin(theta), 0.0);
  const Vec3 t(-std::sin(theta), std::cos(theta), 0.0);
  const double h = f.h(theta), dh = f.dh(theta), d2h = f.d2h(theta);
  SupportJet j;
  j.value = rho * h;
  j.gradient = h * u + dh * t;
  j.hessian = ((h + d2h) / rho) * (t * t.transpose());
  return j;
}

double harmonic_value(const HarmonicBody3D& s, const Vec3& y) {
  double buf[sh_count(16)];
  std::vector<double> heap;
  std::span<double> out;
  if (s.degree <= 16) {
    out = std::span<double>(buf, static_cast<std::size_t>(sh_count(s.degree)));
  } else {
    heap.resize(static_cast<std::size_t>(sh_count(s.degree)));
    out = heap;
  }
  solid_harmonics<double>(s.degree, y.x(), y.y(), y.z(), out);
  const double r = y.norm();
  double total = 0.0;
  double rpow = r;  // r^(1-l)
  for (int l = 0; l <= s.degree; ++l) {
    double part = 0.0;
    for (int m = -l; m <= l; ++m) part += s.coeffs[static_cast<std::size_t>(sh_index(l, m))] * out[static_cast<std::size_t>(sh_index(l, m))];
    total += rpow * part;
    rpow /= r;
  }
  return total;
}

SupportJet harmonic_jet(const HarmonicBody3D& s, const Vec3& y) {
  const Jet x = Jet::variable(y.x(), 0);
  const Jet yy = Jet::variable(y.y(), 1);
  const Jet z = Jet::variable(y.z(), 2);
  std::vector<Jet> out(static_cast<std::size_t>(sh_count(s.degree)));
  solid_harmonics<Jet>(s.degree, x, yy, z, out);
  const Jet r2 = x * x + yy * yy + z * z;
  Jet total(0.0);
  for (int l = 0; l <= s.degree; ++l) {
    Jet part(0.0);
    bool any = false;
    for (int m = -l; m <= l; ++m) {
      const double c = s.coeffs[static_cast<std::size_t>(sh_index(l, m))];
      if (c == 0.0) continue;
      part += c * out[static_cast<std::size_t>(sh_index(l, m))];
      any = true;
    }
    if (!any) continue;
    total += (l == 1) ? part : pow(r2, 0.5 * (1.0 - l)) * part;
  }
  SupportJet j;
  j.value = total.v;
  j.gradient = total.g;
  j.hessian = total.h;
  return j;
}

}  // namespace

// ---------------------------------------------------------------------------
// Body implementation

struct Body::Impl {
  Rep rep;
  int dim = 3;
  std::optional<EllipsoidEval> ellipsoid;       // for Ellipsoid rep
  std::optional<EllipsoidEval> base;            // for perturbed ellipsoids
  Vec3 anchor = Vec3::Zero();
  double radius = 1.0;
  ValidationReport report;
  std::vector<Vec3> grid;                       // membership grid
  std::vector<double> grid_support;

  double value(const Vec3& y) const {
    return std::visit(Overloaded{
                          [&](const Ellipsoid&) { return ellipsoid->value(y); },
                          [&](const FourierBody2D& f) { return fourier_value(f, y); },
                          [&](const HarmonicBody3D& s) {
                            double v = harmonic_value(s, y);
                            if (base) v += base->value(y);
                            return v;
                          },
                      },
                      rep);
  }

  SupportJet jet(const Vec3& y) const {
    return std::visit(Overloaded{
                          [&](const Ellipsoid&) { return ellipsoid->jet(y); },
                          [&](const FourierBody2D& f) { return fourier_jet(f, y); },
                          [&](const HarmonicBody3D& s) {
                            SupportJet j = harmonic_jet(s, y);
                            if (base) {
                              const SupportJet b = base->jet(y);
                              j.value += b.value;
                              j.gradient += b.gradient;
                              j.hessian += b.hessian;
                            }
                            return j;
                          },
                      },
                      rep);
  }

  void build();
  void validate_ellipsoid(const Ellipsoid& e);
  void validate_fourier(const FourierBody2D& f);
  void validate_harmonic(const HarmonicBody3D& s);
  SupportGap gap_max(const Vec3& x) const;
};

namespace {

void add_violation(ValidationReport& r, const std::string& what, double margin) {
  r.valid = false;
  r.violations.push_back({what, margin});
}

}  // namespace

void Body::Impl::validate_ellipsoid(const Ellipsoid& e) {
  const double asym = (e.shape - e.shape.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12) add_violation(report, "shape symmetric", asym);
  const Mat3 sym = 0.5 * (e.shape + e.shape.transpose());
  const double min_eig = Eigen::SelfAdjointEigenSolver<Mat3>(sym, Eigen::EigenvaluesOnly).eigenvalues()[0];
  if (!(min_eig > 0.0)) add_violation(report, "shape positive definite", min_eig);
  if (!e.center.allFinite() || !e.shape.allFinite()) add_violation(report, "finite values", 0.0);
  report.min_curvature = min_eig > 0 ? 1.0 / std::sqrt(sym.eigenvalues().real().maxCoeff()) : min_eig;
  report.strictly_convex = report.valid;
}

void Body::Impl::validate_fourier(const FourierBody2D& f) {
  double min_radius = std::numeric_limits<double>::infinity();
  double min_h = std::numeric_limits<double>::infinity();
  for (int j = 0; j < kValidationGrid; ++j) {
    const double t = 2.0 * kPi * j / kValidationGrid;
    min_radius = std::min(min_radius, f.h(t) + f.d2h(t));
    min_h = std::min(min_h, f.h(t));
  }
  report.min_curvature = min_radius;
  if (!(min_radius > 0.0)) add_violation(report, "h + h'' > 0", min_radius);
  if (!(min_h > 0.0)) add_violation(report, "h > 0 (origin interior)", min_h);
  report.strictly_convex = report.valid && min_radius > kStrictFloor;
}

void Body::Impl::validate_harmonic(const HarmonicBody3D& s) {
  if (s.coeffs.size() != static_cast<std::size_t>(sh_count(s.degree))) {
    add_violation(report, "coefficient count matches degree", 0.0);
    report.strictly_convex = false;
    return;
  }
  const auto grid3 = sphere_grid(kValidationGrid);
  double min_eig = std::numeric_limits<double>::infinity();
  double min_h = std::numeric_limits<double>::infinity();
  for (const auto& dir : grid3) {
    const Vec3& u = dir.vec();
    const SupportJet j = jet(u);
    const auto [e1, e2] = orthonormal_complement(u);
    Mat2 t;
    t(0, 0) = e1.dot(j.hessian * e1);
    t(0, 1) = t(1, 0) = e1.dot(j.hessian * e2);
    t(1, 1) = e2.dot(j.hessian * e2);
    min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<Mat2>(t, Eigen::EigenvaluesOnly).eigenvalues()[0]);
    const double h = base ? j.value - base->center.dot(u) : j.value;
    min_h = std::min(min_h, h);
  }
  report.min_curvature = min_eig;
  if (!(min_eig > kConvexityFloor)) add_violation(report, "tangential Hessian positive semidefinite", min_eig);
  if (!(min_h > 0.0))
    add_violation(report, base ? "h(u) - <center,u> > 0 (center interior)" : "h > 0 (origin interior)", min_h);
  report.strictly_convex = report.valid && min_eig > kStrictFloor;
}

void Body::Impl::build() {
  std::visit(Overloaded{
                 [&](const Ellipsoid& e) {
                   dim = e.dim;
                   Ellipsoid clean = e;
                   if (dim == 2) clean.shape = embed_planar(e.shape);
                   rep = clean;
                   validate_ellipsoid(clean);
                   const Mat3 sym = 0.5 * (clean.shape + clean.shape.transpose());
                   ellipsoid = EllipsoidEval{clean.center, report.valid ? Mat3(sym.inverse()) : Mat3::Identity()};
                 },
                 [&](const FourierBody2D& f) {
                   dim = 2;
                   validate_fourier(f);
                 },
                 [&](const HarmonicBody3D& s) {
                   dim = 3;
                   if (s.base) {
                     require(s.base->dim == 3, "harmonic body base must be a 3D ellipsoid");
                     Ellipsoid b = *s.base;
                     const Mat3 sym = 0.5 * (b.shape + b.shape.transpose());
                     base = EllipsoidEval{b.center, sym.inverse()};
                   }
                   validate_harmonic(s);
                 },
             },
             rep);

  const DirectionGrid mgrid = dim == 3 ? sphere_grid(kMembershipGrid) : circle_grid(kMembershipGrid);
  grid.reserve(mgrid.size());
  grid_support.reserve(mgrid.size());
  for (const auto& d : mgrid) {
    grid.push_back(d.vec());
    grid_support.push_back(value(d.vec()));
  }

  if (const auto* e = std::get_if<Ellipsoid>(&rep)) {
    anchor = e->center;
    radius = report.valid ? std::sqrt(ellipsoid->inv.eigenvalues().real().maxCoeff()) : 1.0;
  } else {
    const DirectionGrid agrid = dim == 3 ? sphere_grid(kAnchorGrid) : circle_grid(kAnchorGrid);
    Vec3 sum = Vec3::Zero();
    for (const auto& d : agrid) sum += jet(d.vec()).gradient;
    anchor = sum / static_cast<double>(agrid.size());
    double r = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) r = std::max(r, (jet(grid[i]).gradient - anchor).norm());
    radius = 1.05 * r + 1e-12;
  }
}

Body::Body(Ellipsoid e) {
  auto impl = std::make_shared<Impl>();
  impl->rep = std::move(e);
  impl->build();
  impl_ = std::move(impl);
}

Body::Body(FourierBody2D f) {
  auto impl = std::make_shared<Impl>();
  impl->rep = std::move(f);
  impl->build();
  impl_ = std::move(impl);
}

Body::Body(HarmonicBody3D s) {
  auto impl = std::make_shared<Impl>();
  impl->rep = std::move(s);
  impl->build();
  impl_ = std::move(impl);
}

const Body::Rep& Body::rep() const { return impl_->rep; }
int Body::dim() const { return impl_->dim; }
const Vec3& Body::anchor() const { return impl_->anchor; }
const ValidationReport& Body::validation() const { return impl_->report; }
double Body::radius() const { return impl_->radius; }

std::string Body::kind() const {
  return std::visit(Overloaded{
                        [](const Ellipsoid&) { return std::string("ellipsoid"); },
                        [](const FourierBody2D&) { return std::string("fourier2d"); },
                        [](const HarmonicBody3D&) { return std::string("sh3d"); },
                    },
                    impl_->rep);
}

double Body::support(const Vec3& u) const { return impl_->value(u); }

SupportJet Body::support_jet(const Vec3& y) const { return impl_->jet(y); }

Vec3 Body::boundary_point(const Vec3& u) const {
  if (!strictly_convex())
    fail(ErrorKind::UnsupportedBody, "boundary_point requires a validated strictly convex body");
  return impl_->jet(u).gradient;
}

// Grid search, three levels of local refinement (spacing / 8 each), then a
// Newton polish on the circle or sphere.
SupportGap Body::Impl::gap_max(const Vec3& x) const {
  std::size_t best = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = x.dot(grid[i]) - grid_support[i];
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  Vec3 u = grid[best];
  auto f = [&](const Vec3& w) { return x.dot(w) - value(w); };

  if (dim == 2) {
    double theta = std::atan2(u.y(), u.x());
    double spacing = 2.0 * kPi / static_cast<double>(grid.size());
    for (int level = 0; level < 3; ++level) {
      spacing /= 8.0;
      double center = theta;
      for (int k = -4; k <= 4; ++k) {
        const double t = center + k * spacing;
        const double v = f(Vec3(std::cos(t), std::sin(t), 0.0));
        if (v > best_v) {
          best_v = v;
          theta = t;
        }
      }
    }
    for (int it = 0; it < 8; ++it) {
      const Vec3 v(std::cos(theta), std::sin(theta), 0.0);
      const Vec3 t(-std::sin(theta), std::cos(theta), 0.0);
      const SupportJet j = jet(v);
      const double d1 = (x - j.gradient).dot(t);
      const double d2 = -x.dot(v) - t.dot(j.hessian * t) + j.value;
      if (!(d2 < 0.0)) break;
      const double step = -d1 / d2;
      const double cand = theta + step;
      const double fv = f(Vec3(std::cos(cand), std::sin(cand), 0.0));
      if (!(fv >= best_v)) break;
      best_v = fv;
      theta = cand;
      if (std::abs(step) < 1e-15) break;
    }
    return {best_v, Vec3(std::cos(theta), std::sin(theta), 0.0)};
  }

  double spacing = std::sqrt(4.0 * kPi / static_cast<double>(grid.size()));
  for (int level = 0; level < 3; ++level) {
    spacing /= 8.0;
    const auto [e1, e2] = orthonormal_complement(u);
    const Vec3 center = u;
    for (int a = -4; a <= 4; ++a) {
      for (int b = -4; b <= 4; ++b) {
        if (a == 0 && b == 0) continue;
        const Vec3 w = (center + a * spacing * e1 + b * spacing * e2).normalized();
        const double v = f(w);
        if (v > best_v) {
          best_v = v;
          u = w;
        }
      }
    }
  }
  for (int it = 0; it < 8; ++it) {
    const auto [e1, e2] = orthonormal_complement(u);
    const SupportJet j = jet(u);
    const double fu = x.dot(u) - j.value;
    const Vec3 r = x - j.gradient;
    const Vec2 g(r.dot(e1), r.dot(e2));
    Mat2 hm;
    hm(0, 0) = -e1.dot(j.hessian * e1) - fu;
    hm(0, 1) = hm(1, 0) = -e1.dot(j.hessian * e2);
    hm(1, 1) = -e2.dot(j.hessian * e2) - fu;
    Eigen::LLT<Mat2> llt(-hm);
    if (llt.info() != Eigen::Success) break;
    const Vec2 step = llt.solve(g);
    const Vec3 cand = (u + step.x() * e1 + step.y() * e2).normalized();
    const double fv = f(cand);
    if (!(fv >= best_v)) break;
    best_v = fv;
    u = cand;
    if (step.norm() < 1e-15) break;
  }
  return {best_v, u};
}

double Body::membership(const Vec3& x) const {
  if (const auto* e = std::get_if<Ellipsoid>(&impl_->rep)) {
    const Vec3 d = x - e->center;
    return d.dot(e->shape * d) - 1.0;
  }
  return impl_->gap_max(x).value;
}

SupportGap Body::support_gap(const Vec3& x) const { return impl_->gap_max(x); }

SupportGap Body::shadow_gap(const Vec3& x, const Vec3& e1, const Vec3& e2) const {
  constexpr int kCoarse = 64;
  auto dir = [&](double t) { return Vec3(std::cos(t) * e1 + std::sin(t) * e2); };
  auto f = [&](double t) {
    const Vec3 v = dir(t);
    return x.dot(v) - impl_->value(v);
  };
  double best_t = 0.0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < kCoarse; ++k) {
    const double t = 2.0 * kPi * k / kCoarse;
    const double v = f(t);
    if (v > best_v) {
      best_v = v;
      best_t = t;
    }
  }
  // Golden-section refinement of the bracketing cell.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = best_t - 2.0 * kPi / kCoarse;
  double hi = best_t + 2.0 * kPi / kCoarse;
  double c = hi - invphi * (hi - lo);
  double d = lo + invphi * (hi - lo);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - invphi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + invphi * (hi - lo);
      fd = f(d);
    }
  }
  const double t = 0.5 * (lo + hi);
  const double ft = f(t);
  if (ft > best_v) {
    best_v = ft;
    best_t = t;
  }
  return {best_v, dir(best_t)};
}

namespace {

// Minimizes the convex function G(s) = H(d + B s) - <p, d + B s> over the
// subspace spanned by the columns of B (all orthogonal to d). The minimum is
// the exit time of the ray p + t d; unboundedness means the line misses.
template <int K>
std::optional<double> convex_exit(const Body& body, const Vec3& p, const Vec3& d,
                                  const Eigen::Matrix<double, 3, K>& basis) {
  using VecK = Eigen::Matrix<double, K, 1>;
  using MatK = Eigen::Matrix<double, K, K>;
  VecK s = VecK::Zero();
  const double scale = 1.0 + p.norm() + body.radius();

  auto eval = [&](const VecK& at, SupportJet& j) {
    const Vec3 y = d + basis * at;
    j = body.support_jet(y);
    return j.value - p.dot(y);
  };

  SupportJet j;
  double g_val = eval(s, j);
  for (int it = 0; it < 100; ++it) {
    const VecK grad = basis.transpose() * (j.gradient - p);
    if (grad.norm() <= 1e-15 * scale) break;
    MatK hess = basis.transpose() * j.hessian * basis;
    const double reg = 1e-14 * (hess.trace() + 1e-300);
    hess += reg * MatK::Identity();
    Eigen::LLT<MatK> llt(hess);
    VecK step = llt.info() == Eigen::Success ? VecK(llt.solve(-grad)) : VecK(-grad);
    const double slope = grad.dot(step);
    double t = 1.0;
    bool accepted = false;
    SupportJet jn;
    for (int ls = 0; ls < 60; ++ls) {
      const VecK cand = s + t * step;
      const double gv = eval(cand, jn);
      if (std::isfinite(gv) && gv <= g_val + 1e-4 * t * slope) {
        s = cand;
        g_val = gv;
        j = jn;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    if (s.norm() > 1e8) return std::nullopt;
    if ((t * step).norm() < 1e-15 * (1.0 + s.norm())) break;
  }
  if (!std::isfinite(g_val)) return std::nullopt;
  return g_val;
}

}  // namespace

std::optional<double> Body::exit_distance(const Vec3& p, const Vec3& d_in) const {
  const Vec3 d = d_in.normalized();
  if (const auto* e = std::get_if<Ellipsoid>(&impl_->rep)) {
    const Vec3 q = p - e->center;
    const double a = d.dot(e->shape * d);
    const double b = d.dot(e->shape * q);
    const double c = q.dot(e->shape * q) - 1.0;
    const double disc = b * b - a * c;
    if (disc < 0.0) return std::nullopt;
    return (-b + std::sqrt(disc)) / a;
  }
  if (dim() == 2) {
    Eigen::Matrix<double, 3, 1> basis(-d.y(), d.x(), 0.0);
    return convex_exit<1>(*this, p, d, basis);
  }
  const auto [e1, e2] = orthonormal_complement(d);
  Eigen::Matrix<double, 3, 2> basis;
  basis.col(0) = e1;
  basis.col(1) = e2;
  return convex_exit<2>(*this, p, d, basis);
}

std::optional<double> Body::shadow_exit_distance(const Vec3& p, const Vec3& d, const Vec3& side) const {
  Eigen::Matrix<double, 3, 1> basis = side;
  return convex_exit<1>(*this, p, d.normalized(), basis);
}

Body Body::homothet(double ratio, const Vec3& q) const {
  require(ratio > 0.0, "homothety ratio must be positive");
  return std::visit(Overloaded{
                        [&](const Ellipsoid& e) {
                          Ellipsoid out = e;
                          out.center = q + ratio * (e.center - q);
                          out.shape = e.shape / (ratio * ratio);
                          if (e.dim == 2) {
                            out.center.z() = 0.0;
                            out.shape = embed_planar(out.shape);
                          }
                          return Body(out);
                        },
                        [&](const FourierBody2D& f) {
                          FourierBody2D out = f;
                          out.a0 *= ratio;
                          for (auto& c : out.coeffs) {
                            c[0] *= ratio;
                            c[1] *= ratio;
                          }
                          if (out.coeffs.empty()) out.coeffs.push_back({0.0, 0.0});
                          out.coeffs[0][0] += (1.0 - ratio) * q.x();
                          out.coeffs[0][1] += (1.0 - ratio) * q.y();
                          return Body(out);
                        },
                        [&](const HarmonicBody3D& s) {
                          HarmonicBody3D out = s;
                          for (auto& c : out.coeffs) c *= ratio;
                          if (out.base) {
                            out.base->center = q + ratio * (s.base->center - q);
                            out.base->shape = s.base->shape / (ratio * ratio);
                          } else {
                            if (out.degree < 1) {
                              out.degree = 1;
                              out.coeffs.resize(static_cast<std::size_t>(sh_count(1)), 0.0);
                            }
                            const auto lin = linear_sh_coeffs((1.0 - ratio) * q);
                            for (int i = 1; i < 4; ++i) out.coeffs[static_cast<std::size_t>(i)] += lin[static_cast<std::size_t>(i)];
                          }
                          return Body(out);
                        },
                    },
                    impl_->rep);
}

Body Body::translated(const Vec3& t) const {
  return std::visit(Overloaded{
                        [&](const Ellipsoid& e) {
                          Ellipsoid out = e;
                          out.center += t;
                          if (e.dim == 2) out.center.z() = 0.0;
                          return Body(out);
                        },
                        [&](const FourierBody2D& f) {
                          FourierBody2D out = f;
                          if (out.coeffs.empty()) out.coeffs.push_back({0.0, 0.0});
                          out.coeffs[0][0] += t.x();
                          out.coeffs[0][1] += t.y();
                          return Body(out);
                        },
                        [&](const HarmonicBody3D& s) {
                          HarmonicBody3D out = s;
                          if (out.base) {
                            out.base->center += t;
                          } else {
                            if (out.degree < 1) {
                              out.degree = 1;
                              out.coeffs.resize(static_cast<std::size_t>(sh_count(1)), 0.0);
                            }
                            const auto lin = linear_sh_coeffs(t);
                            for (int i = 1; i < 4; ++i) out.coeffs[static_cast<std::size_t>(i)] += lin[static_cast<std::size_t>(i)];
                          }
                          return Body(out);
                        },
                    },
                    impl_->rep);
}

// ---------------------------------------------------------------------------
// Free functions

double support(const Body& b, const Direction& u) { return b.support(u.vec()); }

Vec3 boundary_point(const Body& b, const Direction& u) { return b.boundary_point(u.vec()); }

double membership(const Body& b, const Vec3& x) { return b.membership(x); }

DirectionGrid body_grid(const Body& b, int m) { return b.dim() == 3 ? sphere_grid(m) : circle_grid(m); }

bool contains_body(const Body& outer, const Body& inner, double margin) {
  require(margin >= 0.0, "contains_body: margin must be non-negative");
  require(outer.dim() == inner.dim(), "contains_body: bodies must have the same dimension");
  for (const auto& u : body_grid(outer, 1024)) {
    if (inner.support(u.vec()) > outer.support(u.vec()) - margin) return false;
  }
  return true;
}

ValidationReport validate(const Body& b) { return b.validation(); }

Ellipsoid apply_affine(const Ellipsoid& e, const Mat3& m, const Vec3& t) {
  const double det = m.determinant();
  if (!(std::abs(det) > 1e-14 * std::max(1.0, m.cwiseAbs().maxCoeff())))
    fail(ErrorKind::InvalidArgument, "apply_affine: map is singular");
  const Mat3 inv = m.inverse();
  Ellipsoid out = e;
  out.center = m * e.center + t;
  out.shape = inv.transpose() * e.shape * inv;
  if (e.dim == 2) {
    out.center.z() = 0.0;
    out.shape = embed_planar(out.shape);
  }
  return out;
}

std::vector<Vec3> sample_boundary(const Body& b, int m) {
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(m));
  for (const auto& u : body_grid(b, m)) out.push_back(b.boundary_point(u.vec()));
  return out;
}

}  // namespace equichord
