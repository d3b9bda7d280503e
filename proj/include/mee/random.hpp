#pragma once

// Seeded samplers for states, unitaries, filters and X-form parameters.

#include <cmath>
#include <random>

#include "mee/filtering.hpp"
#include "mee/linalg.hpp"
#include "mee/qstate.hpp"

namespace mee::sample {

using Rng = std::mt19937_64;

inline cplx gaussian_c(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double re = g(rng);
  return {re, g(rng)};
}

inline Mat2c ginibre2(Rng& rng) {
  Mat2c m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = gaussian_c(rng);
  return m;
}

inline Mat4c ginibre4(Rng& rng) {
  Mat4c m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = gaussian_c(rng);
  return m;
}

/// Random full-rank density matrix G G^dag / Tr.
inline DensityMatrix density(Rng& rng) {
  const Mat4c g = ginibre4(rng);
  Mat4c rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix::unchecked(0.5 * (rho + rho.adjoint()));
}

/// Haar-distributed 2x2 unitary (QR of a Ginibre matrix with phase fix).
inline Mat2c unitary2(Rng& rng) {
  Eigen::HouseholderQR<Mat2c> qr(ginibre2(rng));
  Mat2c q = qr.householderQ();
  const Mat2c r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < 2; ++k) q.col(k) *= r(k, k) / std::abs(r(k, k));
  return q;
}

/// Random invertible local filter with Gaussian entries.
inline LocalFilter filter(Rng& rng) {
  for (;;) {
    LocalFilter f{ginibre2(rng), ginibre2(rng)};
    if (std::abs(f.a.determinant()) > 1e-3 && std::abs(f.b.determinant()) > 1e-3) return f;
  }
}

/// Uniform over physical X-form parameters whose blocks have eigenvalues >= min_eig.
inline XStateParams x_state(Rng& rng, double min_eig = 0.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    XStateParams x{u(rng), u(rng), u(rng), u(rng)};
    const double outer = (1.0 + x.c - std::hypot(2.0 * x.d, x.a - x.b)) / 4.0;
    const double inner = (1.0 - x.c - std::abs(x.a + x.b)) / 4.0;
    if (outer >= min_eig && inner >= min_eig) return x;
  }
}

/// Uniform over the Bell-diagonal tetrahedron.
inline BellDiagonalState bell_diagonal(Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    BellDiagonalState s{u(rng), u(rng), u(rng)};
    if (is_physical(s, 0.0)) return s;
  }
}

}  // namespace mee::sample
