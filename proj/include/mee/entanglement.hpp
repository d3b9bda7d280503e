#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "mee/error.hpp"
#include "mee/linalg.hpp"
#include "mee/qstate.hpp"

namespace mee {

/// Bell-diagonal standard form rho = (1 + sum_i C_i sigma_i (x) sigma_i) / 4.
struct BellDiagonalState {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;

  /// Eigenvalues of rho in the order used by the concurrence formula.
  std::array<double, 4> eigenvalues() const {
    return {0.25 * (1.0 + c1 - c2 + c3), 0.25 * (1.0 - c1 + c2 + c3), 0.25 * (1.0 + c1 + c2 - c3),
            0.25 * (1.0 - c1 - c2 - c3)};
  }

  friend bool operator==(const BellDiagonalState&, const BellDiagonalState&) = default;
};

/// Tetrahedron membership: every eigenvalue in [0, 1] up to `slack`.
inline bool is_physical(const BellDiagonalState& s, double slack = tol::kPositivity) {
  for (double p : s.eigenvalues())
    if (!(p >= -slack && p <= 1.0 + slack)) return false;
  return true;
}

inline CorrelationTensor to_correlation(const BellDiagonalState& s) {
  CorrelationTensor t;
  t(0, 0) = 1.0;
  t(1, 1) = s.c1;
  t(2, 2) = s.c2;
  t(3, 3) = s.c3;
  return t;
}

inline DensityMatrix to_density(const BellDiagonalState& s) { return density_from_correlation(to_correlation(s)); }

/// (sigma_y (x) sigma_y) rho^* (sigma_y (x) sigma_y).
inline Mat4c spin_flip(const DensityMatrix& rho) {
  const Mat4c yy = kron(pauli::y(), pauli::y());
  return yy * rho.matrix().conjugate() * yy;
}

/// Wootters concurrence from the spectrum of R = rho * spin_flip(rho).
///
/// The spectrum is taken from the Hermitian matrix sqrt(rho) rho~ sqrt(rho),
/// which is similar to R, so only the Hermitian eigensolver is needed.
inline double concurrence(const DensityMatrix& rho) {
  const Mat4c root = sqrt_psd(rho.matrix());
  Mat4c m = root * spin_flip(rho) * root;
  m = 0.5 * (m + m.adjoint());
  const Vec4 r = eig_hermitian4(m).values;
  std::array<double, 4> s{};
  for (int k = 0; k < 4; ++k) {
    if (r(k) < -tol::kPositivity) throw Error(Errc::Unphysical, "concurrence: R has a negative eigenvalue");
    s[k] = std::sqrt(std::max(r(k), 0.0));
  }
  const double largest = *std::max_element(s.begin(), s.end());
  const double c = 2.0 * largest - (s[0] + s[1] + s[2] + s[3]);
  return std::clamp(c, 0.0, 1.0);
}

namespace detail {

inline double bell_concurrence(const BellDiagonalState& s) {
  const auto p = s.eigenvalues();
  const double largest = *std::max_element(p.begin(), p.end());
  return std::clamp(2.0 * largest - (p[0] + p[1] + p[2] + p[3]), 0.0, 1.0);
}

}  // namespace detail

inline double concurrence_bell_diagonal(const BellDiagonalState& s) {
  if (!is_physical(s)) throw Error(Errc::Unphysical, "Bell-diagonal coordinates lie outside the tetrahedron");
  return detail::bell_concurrence(s);
}

/// Closed form for the X-shaped density matrix:
/// C = 2 max{0, |rho_23| - sqrt(rho_11 rho_44), |rho_14| - sqrt(rho_22 rho_33)}.
inline double concurrence_x_state(const XStateParams& x) {
  require_physical(x, "concurrence_x_state");
  const double r11 = std::max((1.0 + x.c + 2.0 * x.d) / 4.0, 0.0);
  const double r44 = std::max((1.0 + x.c - 2.0 * x.d) / 4.0, 0.0);
  const double r22 = std::max((1.0 - x.c) / 4.0, 0.0);
  const double r14 = std::abs(x.a - x.b) / 4.0;
  const double r23 = std::abs(x.a + x.b) / 4.0;
  const double c = 2.0 * std::max({0.0, r23 - std::sqrt(r11 * r44), r14 - r22});
  return std::clamp(c, 0.0, 1.0);
}

/// Partial transpose over the right factor (qubit B).
inline Mat4c partial_transpose_b(const Mat4c& m) {
  Mat4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = m.block<2, 2>(2 * i, 2 * j).transpose();
  return out;
}

/// Smallest eigenvalue of rho^{T_B}; negative iff the two-qubit state is entangled.
inline double ppt_min_eigenvalue(const DensityMatrix& rho) {
  return eig_hermitian4(partial_transpose_b(rho.matrix())).values(0);
}

}  // namespace mee
