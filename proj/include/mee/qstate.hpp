#pragma once

// Two-qubit state representations: density matrix, Pauli correlation tensor,
// and the symmetric X-form family (a, b, c, d).
//
// Basis order is |++>, |+->, |-+>, |--> with |+> the excited level; the left
// tensor factor is qubit A.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mee/error.hpp"
#include "mee/linalg.hpp"

namespace mee {

namespace tol {
inline constexpr double kAlgebraic = 1e-12;
inline constexpr double kPositivity = 1e-10;
inline constexpr double kXForm = 1e-9;
}  // namespace tol

class DensityMatrix {
 public:
  DensityMatrix() : m_(Mat4c::Identity() / 4.0) {}

  /// Wraps `m` without validation.
  static DensityMatrix unchecked(const Mat4c& m) { return DensityMatrix(m); }

  /// Wraps `m` after checking Hermiticity, unit trace (both within
  /// `algebraic`) and positivity (min eigenvalue >= -`positivity`).
  static DensityMatrix checked(const Mat4c& m, double algebraic = tol::kAlgebraic,
                               double positivity = tol::kPositivity) {
    if (!m.allFinite()) throw Error(Errc::Unphysical, "density matrix has non-finite entries");
    if (hermiticity_defect(m) > algebraic) throw Error(Errc::Unphysical, "density matrix is not Hermitian");
    if (std::abs(m.trace() - 1.0) > algebraic) throw Error(Errc::Unphysical, "density matrix trace differs from 1");
    if (eig_hermitian4(m).values(0) < -positivity)
      throw Error(Errc::Unphysical, "density matrix is not positive semidefinite");
    return DensityMatrix(m);
  }

  /// |psi><psi| for a normalized `psi` (normalized here if it is not).
  static DensityMatrix pure(const Vec4c& psi) {
    const Vec4c u = psi.normalized();
    return DensityMatrix(u * u.adjoint());
  }

  const Mat4c& matrix() const noexcept { return m_; }
  cplx operator()(int i, int j) const { return m_(i, j); }

 private:
  explicit DensityMatrix(const Mat4c& m) : m_(m) {}
  Mat4c m_;
};

/// Real coefficients c^{mu nu} = Tr[rho sigma_mu (x) sigma_nu].
struct CorrelationTensor {
  Mat4 c = Mat4::Zero();

  double operator()(int mu, int nu) const { return c(mu, nu); }
  double& operator()(int mu, int nu) { return c(mu, nu); }
};

/// Nonzero correlation entries of the symmetric X-form:
/// c^{11} = a, c^{22} = b, c^{33} = c, c^{03} = c^{30} = d.
struct XStateParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  friend bool operator==(const XStateParams&, const XStateParams&) = default;
};

/// Pauli-basis physicality of the X-form: positivity of its two 2x2 blocks.
inline bool is_physical(const XStateParams& x, double slack = tol::kPositivity) {
  if (!(std::isfinite(x.a) && std::isfinite(x.b) && std::isfinite(x.c) && std::isfinite(x.d))) return false;
  const double one_plus = 1.0 + x.c;
  const double one_minus = 1.0 - x.c;
  if (one_plus < -slack || one_minus < -slack) return false;
  // Outer block {|++>, |-->}: (1+c)^2 >= 4d^2 + (a-b)^2, written via its eigenvalue.
  const double outer = one_plus - std::hypot(2.0 * x.d, x.a - x.b);
  const double inner = one_minus - std::abs(x.a + x.b);
  return outer >= -4.0 * slack && inner >= -4.0 * slack;
}

inline void require_physical(const XStateParams& x, const char* where) {
  if (!is_physical(x)) throw Error(Errc::Unphysical, std::string(where) + ": X-form parameters are not a physical state");
}

inline DensityMatrix density_from_correlation(const CorrelationTensor& t) {
  Mat4c rho = Mat4c::Zero();
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      if (t(mu, nu) != 0.0) rho += t(mu, nu) * kron(pauli::sigma(mu), pauli::sigma(nu));
  return DensityMatrix::unchecked(rho / 4.0);
}

inline CorrelationTensor correlation_from_density(const DensityMatrix& rho) {
  CorrelationTensor t;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu)
      t(mu, nu) = (rho.matrix() * kron(pauli::sigma(mu), pauli::sigma(nu))).trace().real();
  return t;
}

inline CorrelationTensor to_correlation(const XStateParams& x) {
  CorrelationTensor t;
  t(0, 0) = 1.0;
  t(1, 1) = x.a;
  t(2, 2) = x.b;
  t(3, 3) = x.c;
  t(0, 3) = x.d;
  t(3, 0) = x.d;
  return t;
}

/// X-form density matrix, written out entrywise.
inline DensityMatrix to_density(const XStateParams& x) {
  Mat4c rho = Mat4c::Zero();
  rho(0, 0) = (1.0 + x.c + 2.0 * x.d) / 4.0;
  rho(1, 1) = (1.0 - x.c) / 4.0;
  rho(2, 2) = (1.0 - x.c) / 4.0;
  rho(3, 3) = (1.0 + x.c - 2.0 * x.d) / 4.0;
  rho(0, 3) = rho(3, 0) = (x.a - x.b) / 4.0;
  rho(1, 2) = rho(2, 1) = (x.a + x.b) / 4.0;
  return DensityMatrix::unchecked(rho);
}

inline XStateParams extract_x_params(const CorrelationTensor& t, double tau = tol::kXForm) {
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      const bool on_pattern = (mu == nu) || (mu == 0 && nu == 3) || (mu == 3 && nu == 0);
      if (!on_pattern && std::abs(t(mu, nu)) > tau)
        throw Error(Errc::NotXForm, "correlation entry (" + std::to_string(mu) + "," + std::to_string(nu) +
                                        ") is off the X-form pattern");
    }
  }
  if (std::abs(t(0, 3) - t(3, 0)) > tau) throw Error(Errc::NotXForm, "asymmetric local polarizations");
  return {t(1, 1), t(2, 2), t(3, 3), 0.5 * (t(0, 3) + t(3, 0))};
}

inline XStateParams extract_x_params(const DensityMatrix& rho, double tau = tol::kXForm) {
  return extract_x_params(correlation_from_density(rho), tau);
}

/// Eigenvalues of rho with slightly negative values (above -1e-10) clipped to 0.
inline Vec4 clipped_spectrum(const DensityMatrix& rho) {
  Vec4 ev = eig_hermitian4(rho.matrix()).values;
  for (int k = 0; k < 4; ++k) {
    if (ev(k) < -tol::kPositivity) throw Error(Errc::Unphysical, "negative eigenvalue in density matrix");
    ev(k) = std::clamp(ev(k), 0.0, 1.0);
  }
  return ev;
}

/// S = -sum p ln p in nats, with 0 ln 0 = 0.
inline double von_neumann_entropy(const DensityMatrix& rho) {
  double s = 0.0;
  for (double p : clipped_spectrum(rho)) {
    if (p > 0.0) s -= p * std::log(p);
  }
  return std::clamp(s, 0.0, std::log(4.0));
}

inline double purity(const DensityMatrix& rho) { return (rho.matrix() * rho.matrix()).trace().real(); }

inline double fidelity_pure(const DensityMatrix& rho, const Vec4c& phi) {
  if (std::abs(phi.norm() - 1.0) > 1e-10) throw Error(Errc::NotNormalized, "fidelity_pure: state vector is not normalized");
  return std::clamp((phi.adjoint() * rho.matrix() * phi)(0, 0).real(), 0.0, 1.0);
}

namespace ket {

inline Vec4c basis(int k) {
  Vec4c v = Vec4c::Zero();
  v(k) = 1.0;
  return v;
}
inline Vec4c pp() { return basis(0); }
inline Vec4c pm() { return basis(1); }
inline Vec4c mp() { return basis(2); }
inline Vec4c mm() { return basis(3); }

/// (|+-> + |-+>)/sqrt2, Bell-diagonal coordinates (1, 1, -1).
inline Vec4c psi_plus() { return (pm() + mp()) / std::numbers::sqrt2; }
/// (|+-> - |-+>)/sqrt2, coordinates (-1, -1, -1).
inline Vec4c psi_minus() { return (pm() - mp()) / std::numbers::sqrt2; }
/// (|++> + |-->)/sqrt2, coordinates (1, -1, 1).
inline Vec4c phi_plus() { return (pp() + mm()) / std::numbers::sqrt2; }
/// (|++> - |-->)/sqrt2, coordinates (-1, 1, 1).
inline Vec4c phi_minus() { return (pp() - mm()) / std::numbers::sqrt2; }

}  // namespace ket

}  // namespace mee
