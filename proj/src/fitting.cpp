#include "equichord/fitting.hpp"

#include <cmath>

namespace equichord {

QuadricFit fit_quadric(std::span<const Vec3> samples, int dim) {
  require(dim == 2 || dim == 3, "fit_quadric: dimension must be 2 or 3");
  const std::size_t need = dim == 3 ? 10 : 6;
  require(samples.size() >= need, "fit_quadric: not enough samples");

  // Condition the design by centering and scaling the cloud.
  Vec3 mean = Vec3::Zero();
  for (const auto& p : samples) mean += p;
  mean /= static_cast<double>(samples.size());
  if (dim == 2) mean.z() = 0.0;
  double scale = 0.0;
  for (const auto& p : samples) scale += (p - mean).head(dim).squaredNorm();
  scale = std::sqrt(scale / static_cast<double>(samples.size()));
  if (!(scale > 0.0)) throw DegenerateFit("fit_quadric: all samples coincide");

  const int cols = dim == 3 ? 10 : 6;
  Eigen::MatrixXd design(static_cast<Eigen::Index>(samples.size()), cols);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Vec3 q = (samples[i] - mean) / scale;
    const auto r = static_cast<Eigen::Index>(i);
    if (dim == 3) {
      design.row(r) << q.x() * q.x(), q.y() * q.y(), q.z() * q.z(), 2 * q.x() * q.y(), 2 * q.x() * q.z(),
          2 * q.y() * q.z(), 2 * q.x(), 2 * q.y(), 2 * q.z(), 1.0;
    } else {
      design.row(r) << q.x() * q.x(), q.y() * q.y(), 2 * q.x() * q.y(), 2 * q.x(), 2 * q.y(), 1.0;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (!(sv(cols - 2) > 1e-10 * sv(0))) throw DegenerateFit("fit_quadric: samples do not determine a quadric");
  const Eigen::VectorXd p = svd.matrixV().col(cols - 1);

  Mat3 Q = Mat3::Identity();
  Vec3 b = Vec3::Zero();
  double k;
  if (dim == 3) {
    Q << p(0), p(3), p(4), p(3), p(1), p(5), p(4), p(5), p(2);
    b << p(6), p(7), p(8);
    k = p(9);
  } else {
    Q(0, 0) = p(0);
    Q(1, 1) = p(1);
    Q(0, 1) = Q(1, 0) = p(2);
    b << p(3), p(4), 0.0;
    k = p(5);
  }
  const auto Qd = Q.topLeftCorner(dim, dim);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(Qd);
  if (!lu.isInvertible()) throw DegenerateFit("fit_quadric: fitted quadric has no center");
  Vec3 c = Vec3::Zero();
  c.head(dim) = -lu.solve(b.head(dim));
  const double s = c.head(dim).dot(Qd * c.head(dim)) - k;
  if (s == 0.0) throw DegenerateFit("fit_quadric: fitted quadric is a cone");

  QuadricFit fit;
  fit.dim = dim;
  fit.raw = Mat3::Identity();
  fit.raw.topLeftCorner(dim, dim) = Qd / (s * scale * scale);
  fit.center = mean + scale * c;
  if (dim == 2) fit.center.z() = 0.0;
  const double tr = fit.raw.topLeftCorner(dim, dim).trace();
  fit.shape = Mat3::Identity();
  fit.shape.topLeftCorner(dim, dim) = fit.raw.topLeftCorner(dim, dim) * (dim / tr);

  double acc = 0.0;
  for (const auto& x : samples) {
    const Vec3 d = x - fit.center;
    const double g = d.head(dim).dot(fit.raw.topLeftCorner(dim, dim) * d.head(dim)) - 1.0;
    acc += g * g;
  }
  fit.rms_residual = std::sqrt(acc / static_cast<double>(samples.size()));
  return fit;
}

QuadricFit fit_body(const Body& b, int m) {
  const auto pts = sample_boundary(b, m);
  return fit_quadric(pts, b.dim());
}

Homothety homothety_test(const QuadricFit& f1, const QuadricFit& f2) {
  require(f1.dim == f2.dim, "homothety_test: fits of different dimension");
  const int n = f1.dim;
  const auto A1 = f1.raw.topLeftCorner(n, n);
  const auto A2 = f2.raw.topLeftCorner(n, n);
  const double s = (A1.cwiseProduct(A2)).sum() / A2.squaredNorm();
  Homothety h;
  h.ratio = s > 0.0 ? std::sqrt(s) : 0.0;
  h.residual = (f1.center - f2.center).norm() + (s * A2 - A1).norm() / A1.norm();
  return h;
}

double isotropy_residual(const QuadricFit& f) {
  const int n = f.dim;
  const auto A = f.raw.topLeftCorner(n, n);
  const double mean = A.trace() / n;
  return (A - mean * Eigen::MatrixXd::Identity(n, n)).norm() / std::abs(mean);
}

double ball_radius(const QuadricFit& f) {
  const int n = f.dim;
  return std::sqrt(n / f.raw.topLeftCorner(n, n).trace());
}

}  // namespace equichord
