#pragma once

// Markovian bath models for two qubits with lowering operators
// sigma_a = sigma (x) 1, sigma_b = 1 (x) sigma, sigma = |-><+|.
//
//   IndependentThermal: each qubit has its own thermal reservoir.
//   CommonThermal:      both couple through S = sigma_a + sigma_b.
//   CommonSqueezed:     CommonThermal plus the phase-sensitive terms
//                       -(gamma m / 2)[e^{i psi} D'[S^dag] + e^{-i psi} D'[S]],
//                       D'[L] rho = 2 L rho L - L L rho - rho L L,
//                       with m = sqrt(n (n + 1)).

#include <cmath>
#include <complex>
#include <string>

#include "mee/error.hpp"
#include "mee/linalg.hpp"
#include "mee/qstate.hpp"

namespace mee {

enum class BathKind { IndependentThermal, CommonThermal, CommonSqueezed };

struct BathModel {
  BathKind kind = BathKind::IndependentThermal;
  double gamma = 1.0;  // decay rate
  double n = 0.0;      // mean thermal photon number
  double psi = 0.0;    // squeezing phase, CommonSqueezed only

  double m() const { return std::sqrt(n * (n + 1.0)); }

  /// Fastest relaxation scale, gamma (1 + 2n).
  double rate_scale() const { return gamma * (1.0 + 2.0 * n); }
};

inline void validate(const BathModel& model) {
  if (!(model.gamma > 0.0) || !std::isfinite(model.gamma)) throw Error(Errc::InvalidModel, "gamma must be positive");
  if (!(model.n >= 0.0) || !std::isfinite(model.n)) throw Error(Errc::InvalidModel, "n must be non-negative");
  if (!std::isfinite(model.psi)) throw Error(Errc::InvalidModel, "psi must be finite");
}

inline BathModel independent_thermal(double gamma, double n) { return {BathKind::IndependentThermal, gamma, n, 0.0}; }
inline BathModel common_thermal(double gamma, double n) { return {BathKind::CommonThermal, gamma, n, 0.0}; }
inline BathModel common_squeezed(double gamma, double n, double psi) {
  return {BathKind::CommonSqueezed, gamma, n, psi};
}

namespace detail {

/// 2 L rho L^dag - L^dag L rho - rho L^dag L.
inline Mat4c dissipator(const Mat4c& l, const Mat4c& rho) {
  const Mat4c ld = l.adjoint();
  const Mat4c ldl = ld * l;
  return 2.0 * l * rho * ld - ldl * rho - rho * ldl;
}

/// 2 L rho L - L L rho - rho L L.
inline Mat4c squeeze_term(const Mat4c& l, const Mat4c& rho) {
  const Mat4c ll = l * l;
  return 2.0 * l * rho * l - ll * rho - rho * ll;
}

}  // namespace detail

/// d rho / dt for the given model. Traceless and Hermitian for Hermitian rho.
inline Mat4c lindblad_rhs(const BathModel& model, const Mat4c& rho) {
  validate(model);
  const Mat4c sa = kron(pauli::lower(), pauli::id());
  const Mat4c sb = kron(pauli::id(), pauli::lower());
  const double n = model.n;
  const double half = 0.5 * model.gamma;

  if (model.kind == BathKind::IndependentThermal) {
    return half * ((n + 1.0) * (detail::dissipator(sa, rho) + detail::dissipator(sb, rho)) +
                   n * (detail::dissipator(sa.adjoint(), rho) + detail::dissipator(sb.adjoint(), rho)));
  }

  const Mat4c s = sa + sb;
  Mat4c out = half * ((n + 1.0) * detail::dissipator(s, rho) + n * detail::dissipator(s.adjoint(), rho));
  if (model.kind == BathKind::CommonSqueezed && n > 0.0) {
    const cplx phase = std::polar(1.0, model.psi);
    out -= half * model.m() *
           (phase * detail::squeeze_term(s.adjoint(), rho) + std::conj(phase) * detail::squeeze_term(s, rho));
  }
  return out;
}

inline Mat4c lindblad_rhs(const BathModel& model, const DensityMatrix& rho) { return lindblad_rhs(model, rho.matrix()); }

/// Time derivative of (a, b, c, d).
struct XRates {
  double da = 0.0;
  double db = 0.0;
  double dc = 0.0;
  double dd = 0.0;
};

/// Reduced equations of motion on the X-form family.
///
/// The squeezed bath keeps the family closed only for real squeezing
/// (sin psi = 0); otherwise c^{12} = c^{21} = gamma m sin(psi) (a + b - 2c)
/// is generated and NotXForm is raised.
inline XRates x_rhs_unchecked(const BathModel& model, const XStateParams& x) {
  const double g = model.gamma;
  const double k = 1.0 + 2.0 * model.n;
  const auto [a, b, c, d] = x;
  switch (model.kind) {
    case BathKind::IndependentThermal:
      return {-g * k * a, -g * k * b, -2.0 * g * (d + k * c), -g * (1.0 + k * d)};
    case BathKind::CommonThermal:
    case BathKind::CommonSqueezed: {
      const double mc = model.kind == BathKind::CommonSqueezed ? model.m() * std::cos(model.psi) : 0.0;
      return {-g * ((k + 2.0 * mc) * (a - c) - d),
              -g * ((k - 2.0 * mc) * (b - c) - d),
              g * (k * (a + b) + 2.0 * mc * (a - b) - 2.0 * k * c - 2.0 * d),
              -0.5 * g * (a + b + 2.0 * k * d + 2.0)};
    }
  }
  return {};
}

inline XRates x_rhs(const BathModel& model, const XStateParams& x) {
  validate(model);
  require_physical(x, "x_rhs");
  if (model.kind == BathKind::CommonSqueezed && model.n > 0.0 && std::abs(std::sin(model.psi)) > 1e-12)
    throw Error(Errc::NotXForm, "x_rhs: complex squeezing phase leaves the X-form family");
  return x_rhs_unchecked(model, x);
}

/// Closed-form independent-bath solution from (a, b, c, d) = (1, 1, -1, 0).
inline XStateParams analytic_independent(double t, double gamma, double n) {
  if (!(t >= 0.0)) throw Error(Errc::NegativeTime, "analytic_independent: t < 0");
  const double k = 1.0 + 2.0 * n;
  const double e1 = std::exp(-gamma * k * t);
  const double e2 = e1 * e1;
  // expm1 keeps d accurate for small gamma t.
  const double d = std::expm1(-gamma * k * t) / k;
  const double c = -e2 - (2.0 * e1 - e2 - 1.0) / (k * k);
  return {e1, e1, c, d};
}

struct DfsBasis {
  Vec4c phi1;
  Vec4c phi2;
};

/// Stationary states of the squeezed bath:
/// phi1 = (n|++> + m e^{-i psi}|-->)/sqrt(n^2 + m^2), phi2 = singlet.
/// At n = 0 phi1 is the limit e^{-i psi}|-->.
inline DfsBasis dfs_states(double n, double psi) {
  if (!(n >= 0.0) || !std::isfinite(n)) throw Error(Errc::NonPositiveN, "dfs_states: n must be >= 0");
  DfsBasis out;
  out.phi2 = (ket::mp() - ket::pm()) / std::sqrt(2.0);
  if (n == 0.0) {
    out.phi1 = std::polar(1.0, -psi) * ket::mm();
    return out;
  }
  const double m = std::sqrt(n * (n + 1.0));
  const double norm = std::hypot(n, m);
  out.phi1 = (n / norm) * ket::pp() + (m / norm) * std::polar(1.0, -psi) * ket::mm();
  return out;
}

}  // namespace mee
