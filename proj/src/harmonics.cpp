#include "equichord/harmonics.hpp"

#include <cmath>

namespace equichord {

namespace {

constexpr int kMaxTabulatedDegree = 32;

std::vector<double> build_normalization(int degree) {
  std::vector<double> out(static_cast<std::size_t>(sh_count(degree)));
  for (int l = 0; l <= degree; ++l) {
    for (int m = 0; m <= l; ++m) {
      // (l-m)! / (l+m)!
      double ratio = 1.0;
      for (int k = l - m + 1; k <= l + m; ++k) ratio /= k;
      const double k_lm = std::sqrt((2.0 * l + 1.0) / (4.0 * kPi) * ratio);
      if (m == 0) {
        out[static_cast<std::size_t>(sh_index(l, 0))] = k_lm;
      } else {
        out[static_cast<std::size_t>(sh_index(l, m))] = std::sqrt(2.0) * k_lm;
        out[static_cast<std::size_t>(sh_index(l, -m))] = std::sqrt(2.0) * k_lm;
      }
    }
  }
  return out;
}

}  // namespace

const std::vector<double>& sh_normalization(int degree) {
  static const std::vector<double> table = build_normalization(kMaxTabulatedDegree);
  require(degree >= 0 && degree <= kMaxTabulatedDegree, "spherical harmonic degree out of range");
  return table;
}

std::vector<double> sh_values(int degree, const Vec3& u) {
  std::vector<double> out(static_cast<std::size_t>(sh_count(degree)));
  solid_harmonics<double>(degree, u.x(), u.y(), u.z(), out);
  return out;
}

double sh_value(int l, int m, const Vec3& u) {
  require(std::abs(m) <= l, "sh_value: |m| must not exceed l");
  return sh_values(l, u)[static_cast<std::size_t>(sh_index(l, m))];
}

std::vector<double> linear_sh_coeffs(const Vec3& t) {
  const double s = std::sqrt(3.0 / (4.0 * kPi));
  return {0.0, t.y() / s, t.z() / s, t.x() / s};
}

}  // namespace equichord
