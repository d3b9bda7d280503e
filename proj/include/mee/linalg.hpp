#pragma once

// Small dense complex linear algebra for two-qubit operators.
//
// Storage is Eigen fixed-size; the Hermitian eigensolver is a cyclic complex
// Jacobi iteration, which stays accurate at (near-)degenerate spectra where
// closed-form quartic roots lose digits.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include "mee/error.hpp"

namespace mee {

using cplx = std::complex<double>;
using Mat2c = Eigen::Matrix2cd;
using Mat4c = Eigen::Matrix4cd;
using Mat4 = Eigen::Matrix4d;
using Vec4c = Eigen::Vector4cd;
using Vec4 = Eigen::Vector4d;

inline constexpr cplx kI{0.0, 1.0};

namespace pauli {

inline Mat2c id() { return Mat2c::Identity(); }

inline Mat2c x() {
  Mat2c m;
  m << 0, 1, 1, 0;
  return m;
}

inline Mat2c y() {
  Mat2c m;
  m << 0, -kI, kI, 0;
  return m;
}

// Basis order (|+>, |->) with |+> the excited level, so sigma_z|+> = +|+>.
inline Mat2c z() {
  Mat2c m;
  m << 1, 0, 0, -1;
  return m;
}

/// sigma_mu for mu in {0,1,2,3}.
inline Mat2c sigma(int mu) {
  switch (mu) {
    case 0: return id();
    case 1: return x();
    case 2: return y();
    default: return z();
  }
}

/// Lowering operator |-><+|.
inline Mat2c lower() {
  Mat2c m;
  m << 0, 0, 1, 0;
  return m;
}

}  // namespace pauli

/// A (x) B with A acting on the left (leftmost) factor.
inline Mat4c kron(const Mat2c& a, const Mat2c& b) {
  Mat4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

inline double hermiticity_defect(const Mat4c& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

struct HermitianEigen {
  Vec4 values;   // ascending
  Mat4c vectors; // columns, matching `values`
};

/// Eigen-decomposition of a 4x4 Hermitian matrix by cyclic Jacobi rotations.
///
/// Throws Errc::NotHermitian when the input deviates from Hermiticity by more
/// than 1e-10 (absolute, entrywise). The result is deterministic: eigenvalues
/// are sorted ascending with a stable sort.
inline HermitianEigen eig_hermitian4(const Mat4c& m) {
  if (!m.allFinite() || hermiticity_defect(m) > 1e-10)
    throw Error(Errc::NotHermitian, "eig_hermitian4: matrix is not Hermitian");

  Mat4c a = 0.5 * (m + m.adjoint());
  Mat4c v = Mat4c::Identity();

  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < 4; ++p)
      for (int q = p + 1; q < 4; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-17 * scale) break;

    for (int p = 0; p < 3; ++p) {
      for (int q = p + 1; q < 4; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag <= 1e-300) continue;
        const cplx phase = a(p, q) / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        // G = diag(1, conj(phase)) followed by a real rotation on (p, q).
        Mat4c g = Mat4c::Identity();
        g(p, p) = c;
        g(p, q) = s;
        g(q, p) = -s * std::conj(phase);
        g(q, q) = c * std::conj(phase);

        a = g.adjoint() * a * g;
        v = v * g;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
      }
    }
  }

  std::array<int, 4> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });
  HermitianEigen out;
  for (int k = 0; k < 4; ++k) {
    out.values(k) = a(order[k], order[k]).real();
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

/// Principal square root of a positive semidefinite Hermitian matrix.
/// Eigenvalues in (-clip, 0) are treated as zero.
inline Mat4c sqrt_psd(const Mat4c& m) {
  const auto e = eig_hermitian4(m);
  Vec4 r;
  for (int k = 0; k < 4; ++k) r(k) = std::sqrt(std::max(e.values(k), 0.0));
  return e.vectors * r.cast<cplx>().asDiagonal() * e.vectors.adjoint();
}

}  // namespace mee
