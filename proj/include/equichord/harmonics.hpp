#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "equichord/jet.hpp"

namespace equichord {

// Real spherical harmonics, orthonormal on S^2, without the Condon-Shortley
// phase. For m > 0 the cos(m phi) branch, for m < 0 the sin(|m| phi) branch.
// Coefficients are stored in lexicographic (l, m) order.

constexpr int sh_count(int degree) { return (degree + 1) * (degree + 1); }
constexpr int sh_index(int l, int m) { return l * l + l + m; }

/// Normalization N_lm so that Y_lm = N_lm * Pi_l^|m|(z, r^2) * {C_m, S_m}.
const std::vector<double>& sh_normalization(int degree);

/// Regular solid harmonics R_lm(p) = |p|^l Y_lm(p / |p|) for l <= degree.
/// They are homogeneous polynomials, so any arithmetic type works (double, Jet).
template <class T>
void solid_harmonics(int degree, const T& x, const T& y, const T& z, std::span<T> out) {
  const auto& norm = sh_normalization(degree);
  const T r2 = x * x + y * y + z * z;

  // C_m + i S_m = (x + i y)^m
  std::vector<T> cm(static_cast<std::size_t>(degree + 1)), sm(static_cast<std::size_t>(degree + 1));
  cm[0] = T(1.0);
  sm[0] = T(0.0);
  for (int m = 1; m <= degree; ++m) {
    cm[static_cast<std::size_t>(m)] = x * cm[static_cast<std::size_t>(m - 1)] - y * sm[static_cast<std::size_t>(m - 1)];
    sm[static_cast<std::size_t>(m)] = x * sm[static_cast<std::size_t>(m - 1)] + y * cm[static_cast<std::size_t>(m - 1)];
  }

  // Pi_l^m = r^(l-m) P_l^(m)(z/r): the m-th derivative of the Legendre
  // polynomial, homogenized. Pi_m^m = (2m-1)!!.
  double dfact = 1.0;
  for (int m = 0; m <= degree; ++m) {
    if (m > 0) dfact *= (2.0 * m - 1.0);
    T prev2(0.0);
    T prev(dfact);
    for (int l = m; l <= degree; ++l) {
      T cur;
      if (l == m) {
        cur = prev;
      } else if (l == m + 1) {
        cur = (2.0 * m + 1.0) * (z * prev);
        prev2 = prev;
        prev = cur;
      } else {
        cur = ((2.0 * l - 1.0) / (l - m)) * (z * prev) - ((l + m - 1.0) / (l - m)) * (r2 * prev2);
        prev2 = prev;
        prev = cur;
      }
      if (m == 0) {
        out[static_cast<std::size_t>(sh_index(l, 0))] = norm[static_cast<std::size_t>(sh_index(l, 0))] * cur;
      } else {
        out[static_cast<std::size_t>(sh_index(l, m))] =
            norm[static_cast<std::size_t>(sh_index(l, m))] * (cur * cm[static_cast<std::size_t>(m)]);
        out[static_cast<std::size_t>(sh_index(l, -m))] =
            norm[static_cast<std::size_t>(sh_index(l, -m))] * (cur * sm[static_cast<std::size_t>(m)]);
      }
    }
  }
}

/// Y_lm at a unit vector.
double sh_value(int l, int m, const Vec3& u);

/// All Y_lm (l <= degree) at a unit vector.
std::vector<double> sh_values(int degree, const Vec3& u);

/// Coefficients c_{1,m} realizing the linear function <t, u>.
std::vector<double> linear_sh_coeffs(const Vec3& t);

}  // namespace equichord
