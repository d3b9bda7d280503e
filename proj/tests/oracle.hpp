#pragma once

// Reference computations that share no code path with the library.

#include <algorithm>
#include <cmath>
#include <array>
#include <complex>
#include <vector>

#include <Eigen/Eigenvalues>

#include "mee/linalg.hpp"

namespace oracle {

using mee::cplx;
using mee::Mat4c;

/// Concurrence from the non-Hermitian R = rho (sy sy) rho* (sy sy) via a general eigensolver.
inline double concurrence(const Mat4c& rho) {
  Mat4c yy = Mat4c::Zero();
  yy(0, 3) = -1.0;
  yy(3, 0) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  const Mat4c r = rho * yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<Mat4c> es(r);
  std::array<double, 4> l{};
  for (int i = 0; i < 4; ++i) l[i] = std::sqrt(std::max(es.eigenvalues()(i).real(), 0.0));
  std::sort(l.begin(), l.end());
  return std::max(0.0, l[3] - l[2] - l[1] - l[0]);
}

/// det(h - lambda I) by LU with partial pivoting.
inline cplx char_poly(const Mat4c& h, double lambda) {
  Mat4c m = h - lambda * Mat4c::Identity();
  return m.partialPivLu().determinant();
}

/// Simple real roots of det(h - x I) for Hermitian h: grid scan for sign
/// changes, then bisection.
inline std::vector<double> char_poly_roots(const Mat4c& h) {
  const double bound = h.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
  std::vector<double> roots;
  const int grid = 20000;
  auto p = [&](double x) { return char_poly(h, x).real(); };
  double x0 = -bound;
  double p0 = p(x0);
  for (int i = 1; i <= grid; ++i) {
    const double x1 = -bound + 2.0 * bound * i / grid;
    const double p1 = p(x1);
    if (p0 == 0.0) roots.push_back(x0);
    else if (p0 * p1 < 0.0) {
      double lo = x0, hi = x1, plo = p0;
      for (int k = 0; k < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++k) {
        const double mid = 0.5 * (lo + hi);
        const double pm = p(mid);
        if ((pm < 0.0) == (plo < 0.0)) {
          lo = mid;
          plo = pm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    x0 = x1;
    p0 = p1;
  }
  return roots;
}

/// Trace of (A (x) A) rho (A (x) A)^dag for A = diag(e^{eta/2}, e^{-eta/2}), minimised over eta by golden section.
inline double min_boost_trace(const Mat4c& rho) {
  auto trace_at = [&](double eta) {
    Mat4c k = Mat4c::Zero();
    const double e[2] = {std::exp(eta / 2), std::exp(-eta / 2)};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) k(2 * i + j, 2 * i + j) = e[i] * e[j];
    return (k * rho * k.adjoint()).trace().real();
  };
  // Coarse scan then golden-section refinement.
  double best = 0.0;
  double fbest = trace_at(0.0);
  for (double eta = -40.0; eta <= 40.0; eta += 0.01) {
    const double f = trace_at(eta);
    if (f < fbest) {
      fbest = f;
      best = eta;
    }
  }
  double lo = best - 0.02, hi = best + 0.02;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < 200; ++i) {
    const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
    if (trace_at(a) < trace_at(b)) hi = b;
    else lo = a;
  }
  return std::min(fbest, trace_at(0.5 * (lo + hi)));
}

}  // namespace oracle
