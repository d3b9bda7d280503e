#pragma once

// Local filtering (SLOCC) on two qubits and its Lorentz-group picture.
//
// A filter A (x) B acts on the correlation tensor as c -> L_A c L_B^T, with
// L = T (A (x) A^*) T^dagger / |det A| a proper orthochronous Lorentz
// transformation. For the symmetric X-form family the optimal filter is the
// same z-boost on both qubits, with rapidity fixed by
//
//   alpha (1 + c) sqrt(1 + alpha^2) = -d (1 + 2 alpha^2),   beta = sqrt(1 + alpha^2),
//
// and the boosted state is Bell-diagonal with
//   C1 = a / D, C2 = b / D, C3 = (alpha^2 + 2 alpha beta d + beta^2 c) / D,
//   D  = beta^2 + 2 alpha beta d + alpha^2 c.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "mee/entanglement.hpp"
#include "mee/error.hpp"
#include "mee/linalg.hpp"
#include "mee/qstate.hpp"

namespace mee {

namespace boost_limits {
/// First boost tried for the infinite-boost limit; doubled up to kMax until converged.
inline constexpr double kCap = 1e4;
/// Largest boost accepted by `partial_extraction` and reached by the doubling.
inline constexpr double kMax = 1e6;
/// (1+c)^2 - 4d^2 below this marks the singular locus.
inline constexpr double kSingular = 1e-12;
/// Agreement required between the capped boost and twice the cap.
inline constexpr double kConvergence = 1e-6;
}  // namespace boost_limits

struct LocalFilter {
  Mat2c a = Mat2c::Identity();
  Mat2c b = Mat2c::Identity();
};

struct LorentzTransform {
  Mat4 l = Mat4::Identity();
};

struct OptimalBoost {
  double alpha = 0.0;
  double beta = 1.0;
  bool singular = false;
};

/// Future-pointing unit timelike vectors (lower-index components).
struct MinkowskiPair {
  Vec4 m = Vec4::UnitX();
  Vec4 n = Vec4::UnitX();
};

inline Mat4 minkowski_metric() { return Vec4(1.0, -1.0, -1.0, -1.0).asDiagonal(); }

/// Max entrywise defect of L^T eta L = eta.
inline double lorentz_defect(const LorentzTransform& t) {
  const Mat4 eta = minkowski_metric();
  return (t.l.transpose() * eta * t.l - eta).cwiseAbs().maxCoeff();
}

inline bool is_proper_orthochronous(const LorentzTransform& t, double tol = 1e-10) {
  return lorentz_defect(t) <= tol * std::max(1.0, t.l.cwiseAbs().maxCoeff()) && t.l(0, 0) >= 1.0 - tol &&
         std::abs(t.l.determinant() - 1.0) <= tol * std::max(1.0, std::pow(t.l.cwiseAbs().maxCoeff(), 4));
}

namespace detail {

inline void require_invertible(const Mat2c& m, const char* which) {
  if (!(std::abs(m.determinant()) > 1e-14))
    throw Error(Errc::SingularFilter, std::string("filter factor ") + which + " is not invertible");
}

}  // namespace detail

inline DensityMatrix apply_filter(const DensityMatrix& rho, const LocalFilter& f) {
  detail::require_invertible(f.a, "A");
  detail::require_invertible(f.b, "B");
  const Mat4c k = kron(f.a, f.b);
  Mat4c out = k * rho.matrix() * k.adjoint();
  const double p = out.trace().real();
  if (!(p > 1e-14)) throw Error(Errc::ZeroSuccessProbability, "filtered state has vanishing trace");
  out /= p;
  return DensityMatrix::unchecked(0.5 * (out + out.adjoint()));
}

/// C |det A| |det B| / Tr[(A^dag A (x) B^dag B) rho].
inline double filtered_concurrence(const DensityMatrix& rho, const LocalFilter& f) {
  detail::require_invertible(f.a, "A");
  detail::require_invertible(f.b, "B");
  const double p = (kron(f.a.adjoint() * f.a, f.b.adjoint() * f.b) * rho.matrix()).trace().real();
  if (!(p > 1e-14)) throw Error(Errc::ZeroSuccessProbability, "filtered state has vanishing trace");
  return concurrence(rho) * std::abs(f.a.determinant()) * std::abs(f.b.determinant()) / p;
}

/// Maps vec(X) (row-major) to the Pauli components Tr[sigma_mu X] / sqrt2.
inline Mat4c pauli_transfer_matrix() {
  Mat4c t;
  t << 1, 0, 0, 1,
       0, 1, 1, 0,
       0, kI, -kI, 0,
       1, 0, 0, -1;
  return t / std::numbers::sqrt2;
}

inline LorentzTransform filter_to_lorentz(const Mat2c& a) {
  detail::require_invertible(a, "A");
  const Mat4c t = pauli_transfer_matrix();
  const Mat4c l = t * kron(a, a.conjugate()) * t.adjoint() / std::abs(a.determinant());
  const double scale = std::max(1.0, l.cwiseAbs().maxCoeff());
  if (l.imag().cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw Error(Errc::SingularFilter, "filter_to_lorentz: transform is not real");
  return {l.real()};
}

/// A = B = diag(sqrt(beta + alpha), sqrt(beta - alpha)), det A = 1.
inline LocalFilter boost_to_filter(const OptimalBoost& ob) {
  if (ob.singular || !std::isfinite(ob.alpha))
    throw Error(Errc::SingularBoost, "boost_to_filter: infinite boost has no filter");
  const double beta = std::sqrt(1.0 + ob.alpha * ob.alpha);
  // Light-cone factors r and 1/r, each computed without cancellation.
  const double r = ob.alpha >= 0.0 ? beta + ob.alpha : 1.0 / (beta - ob.alpha);
  Mat2c a = Mat2c::Zero();
  a(0, 0) = std::sqrt(r);
  a(1, 1) = 1.0 / std::sqrt(r);
  return {a, a};
}

inline OptimalBoost optimal_boost(const XStateParams& x) {
  require_physical(x, "optimal_boost");
  // Already Bell-diagonal: the identity is optimal, including at c = -1.
  if (x.d == 0.0) return {0.0, 1.0, false};
  const double one_plus = 1.0 + x.c;
  if (!(one_plus > 0.0)) throw Error(Errc::DegenerateC, "optimal_boost: 1 + c <= 0 with d != 0");

  const double gap = (one_plus - 2.0 * x.d) * (one_plus + 2.0 * x.d);  // (1+c)^2 - 4d^2
  const double sign = x.d > 0.0 ? -1.0 : 1.0;
  if (gap < boost_limits::kSingular) return {sign * std::numeric_limits<double>::infinity(),
                                             std::numeric_limits<double>::infinity(), true};

  const double alpha2 = std::max(0.5 * (one_plus / std::sqrt(gap) - 1.0), 0.0);
  const double alpha = sign * std::sqrt(alpha2);
  return {alpha, std::sqrt(1.0 + alpha2), false};
}

/// Residual of alpha (1+c) beta + d (1 + 2 alpha^2) = 0.
inline double boost_residual(const XStateParams& x, const OptimalBoost& ob) {
  return ob.alpha * (1.0 + x.c) * ob.beta + x.d * (1.0 + 2.0 * ob.alpha * ob.alpha);
}

/// Details of the optimal normal form; `bell` is what `optimal_bell_state` returns.
struct OptimalNormalForm {
  BellDiagonalState bell;
  OptimalBoost boost;
  double denominator = 1.0;  ///< D, the filtered trace for a det-1 filter.
  bool converged = true;     ///< Singular case: cap and doubled cap agree.
};

namespace detail {

/// Boosted state at light-cone factor r = beta + alpha, using the X-form
/// block populations. On the singular locus the vanishing block is passed as 0.
inline BellDiagonalState boosted_bell(const XStateParams& x, double upper, double lower, double r, double& denom) {
  const double r2 = r * r;
  const double mid = 0.5 * (1.0 - x.c);
  const double outer = 0.25 * (r2 * upper + lower / r2);
  denom = outer + mid;
  return {x.a / denom, x.b / denom, (outer - mid) / denom};
}

}  // namespace detail

inline OptimalNormalForm optimal_normal_form(const XStateParams& x) {
  OptimalNormalForm out;
  out.boost = optimal_boost(x);
  const auto& ob = out.boost;

  if (!ob.singular) {
    const double a2 = ob.alpha * ob.alpha;
    const double cross = 2.0 * ob.alpha * ob.beta * x.d;
    const double denom = ob.beta * ob.beta + cross + a2 * x.c;
    if (!(denom > 1e-12)) throw Error(Errc::NonPositiveDenominator, "optimal_bell_state: D <= 1e-12");
    out.denominator = denom;
    out.bell = {x.a / denom, x.b / denom, (a2 + cross + ob.beta * ob.beta * x.c) / denom};
  } else {
    // Infinite boost. The block that the boost amplifies (|++> for d < 0,
    // |--> for d > 0) vanishes on the singular locus and is projected to 0.
    const bool up = x.d < 0.0;
    const double amplified = 0.0;
    const double other = up ? (1.0 + x.c - 2.0 * x.d) : (1.0 + x.c + 2.0 * x.d);
    auto at = [&](double alpha, double& denom) {
      const double beta = std::sqrt(1.0 + alpha * alpha);
      const double r = beta + alpha;
      return up ? detail::boosted_bell(x, amplified, other, r, denom)
                : detail::boosted_bell(x, other, amplified, 1.0 / r, denom);
    };
    // Double the boost from the cap until successive forms agree, up to kMax.
    double alpha = boost_limits::kCap;
    double d1 = 0.0;
    double d2 = 0.0;
    auto s1 = at(alpha, d1);
    auto s2 = at(2.0 * alpha, d2);
    auto gap = [&] { return std::max({std::abs(s1.c1 - s2.c1), std::abs(s1.c2 - s2.c2), std::abs(s1.c3 - s2.c3)}); };
    while (gap() > boost_limits::kConvergence && 4.0 * alpha <= boost_limits::kMax) {
      alpha *= 2.0;
      s1 = s2;
      d1 = d2;
      s2 = at(2.0 * alpha, d2);
    }
    if (!(d2 > 1e-12)) throw Error(Errc::NonPositiveDenominator, "optimal_bell_state: D <= 1e-12 at capped boost");
    out.converged = gap() <= boost_limits::kConvergence;
    out.bell = s2;
    out.denominator = d2;
  }
  if (!is_physical(out.bell, 1e-8))
    throw Error(Errc::Unphysical, "optimal_bell_state: normal form left the tetrahedron");
  return out;
}

inline BellDiagonalState optimal_bell_state(const XStateParams& x) { return optimal_normal_form(x).bell; }

inline double max_extractable_entanglement(const XStateParams& x) {
  // optimal_normal_form already enforced the tetrahedron to 1e-8.
  return detail::bell_concurrence(optimal_bell_state(x));
}

/// Concurrence after the symmetric z-boost A = B = diag(sqrt(r), 1/sqrt(r)),
/// r = beta + alpha, evaluated as C / Tr[(A^dag A (x) B^dag B) rho].
/// On the singular locus the vanishing population block is projected to 0 so
/// that its roundoff is not amplified by r^2.
inline double partial_extraction(const XStateParams& x, double alpha) {
  require_physical(x, "partial_extraction");
  if (!(std::abs(alpha) <= boost_limits::kMax))
    throw Error(Errc::BoostCapExceeded, "partial_extraction: |alpha| exceeds " + std::to_string(boost_limits::kMax));
  if (alpha == 0.0) return concurrence_x_state(x);

  XStateParams y = x;
  const double one_plus = 1.0 + x.c;
  if (x.d != 0.0 && (one_plus - 2.0 * std::abs(x.d)) * (one_plus + 2.0 * std::abs(x.d)) < boost_limits::kSingular)
    y.d = std::copysign(0.5 * one_plus, x.d);

  const double beta = std::sqrt(1.0 + alpha * alpha);
  const double r = alpha >= 0.0 ? beta + alpha : 1.0 / (beta - alpha);
  const double p11 = std::max(0.25 * (1.0 + y.c + 2.0 * y.d), 0.0);
  const double p44 = std::max(0.25 * (1.0 + y.c - 2.0 * y.d), 0.0);
  const double p22 = 0.25 * (1.0 - y.c);
  const double trace = r * r * p11 + p44 / (r * r) + 2.0 * p22;
  if (!(trace > 1e-14)) throw Error(Errc::ZeroSuccessProbability, "partial_extraction: filtered trace vanishes");
  return std::clamp(concurrence_x_state(y) / trace, 0.0, 1.0);
}

// --- brute-force check of the closed form --------------------------------

struct FOracleResult {
  MinkowskiPair pair;
  double value = 0.0;
  int iterations = 0;
};

namespace detail {

/// argmin over unit future timelike n of v^nu n_nu, i.e. n = (v0, -v)/|v|_eta.
inline Vec4 best_response(const Vec4& v) {
  const double spatial = v.tail<3>().norm();
  const double norm2 = (v(0) - spatial) * (v(0) + spatial);
  if (!(v(0) > 0.0) || !(norm2 > 0.0))
    throw Error(Errc::NoConvergence, "minimize_F_oracle: F is unbounded below (state not full rank)");
  const double norm = std::sqrt(norm2);
  return Vec4(v(0) / norm, -v(1) / norm, -v(2) / norm, -v(3) / norm);
}

}  // namespace detail

/// Minimises F(m, n) = c^{mu nu} m_mu n_nu over future unit timelike m, n by
/// alternating exact best responses from `starts` random rapidity seeds.
inline FOracleResult minimize_F_oracle(const CorrelationTensor& t, std::uint64_t seed = 0x5eed, int starts = 8,
                                       int max_iterations = 10000) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> rapidity(0.0, 2.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Mat4& c = t.c;

  FOracleResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (int s = 0; s < starts; ++s) {
    Vec4 m = Vec4::UnitX();
    if (s > 0) {
      Eigen::Vector3d u(gauss(rng), gauss(rng), gauss(rng));
      u.normalize();
      const double r = rapidity(rng);
      m << std::cosh(r), std::sinh(r) * u;
    }
    Vec4 n = detail::best_response(c.transpose() * m);
    double f = m.dot(c * n);
    int it = 0;
    bool done = false;
    for (; it < max_iterations; ++it) {
      const Vec4 m_next = detail::best_response(c * n);
      const Vec4 n_next = detail::best_response(c.transpose() * m_next);
      const double f_next = m_next.dot(c * n_next);
      const double step = std::max((m_next - m).cwiseAbs().maxCoeff(), (n_next - n).cwiseAbs().maxCoeff());
      const double df = std::abs(f - f_next);
      m = m_next;
      n = n_next;
      f = f_next;
      if (df <= 1e-12 * std::max(1.0, std::abs(f)) && step <= 1e-12 * std::max(1.0, m(0))) {
        done = true;
        break;
      }
    }
    if (!done) throw Error(Errc::NoConvergence, "minimize_F_oracle: no convergence after iteration cap");
    // Ties keep the earlier start, so the identity seed wins on symmetric input.
    if (f < best.value - 1e-12 * std::max(1.0, std::abs(f))) best = {{m, n}, f, it + 1};
  }
  return best;
}

}  // namespace mee
