#include <gtest/gtest.h>

#include <cmath>

#include "mee/entanglement.hpp"
#include "mee/qstate.hpp"
#include "mee/random.hpp"
#include "oracle.hpp"

using namespace mee;

namespace {

Mat4c random_hermitian(sample::Rng& rng) {
  const Mat4c g = sample::ginibre4(rng);
  return 0.5 * (g + g.adjoint());
}

Mat4c random_unitary4(sample::Rng& rng) {
  Eigen::HouseholderQR<Mat4c> qr(sample::ginibre4(rng));
  return qr.householderQ();
}

}  // namespace

TEST(Eigensolver, IdentityAndDiagonal) {
  const auto id = eig_hermitian4(Mat4c::Identity()).values;
  for (int k = 0; k < 4; ++k) EXPECT_DOUBLE_EQ(id(k), 1.0);

  Mat4c d = Mat4c::Zero();
  d.diagonal() << 0.3, 0.1, 0.4, 0.2;
  const auto v = eig_hermitian4(d).values;
  EXPECT_NEAR(v(0), 0.1, 1e-15);
  EXPECT_NEAR(v(1), 0.2, 1e-15);
  EXPECT_NEAR(v(2), 0.3, 1e-15);
  EXPECT_NEAR(v(3), 0.4, 1e-15);
}

TEST(Eigensolver, MatchesCharacteristicPolynomialRoots) {
  sample::Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat4c h = random_hermitian(rng);
    const auto roots = oracle::char_poly_roots(h);
    ASSERT_EQ(roots.size(), 4u);
    const auto v = eig_hermitian4(h).values;
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(v(k), roots[k], 1e-9);
  }
}

TEST(Eigensolver, KnownSpectrumUnderConjugation) {
  sample::Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const Mat4c u = random_unitary4(rng);
    Mat4c d = Mat4c::Zero();
    // Includes a near-degenerate pair.
    d.diagonal() << -1.5, 0.25, 0.25 + 1e-9, 2.0;
    const auto e = eig_hermitian4(u * d * u.adjoint());
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(e.values(k), d(k, k).real(), 1e-12);
    const Mat4c h = u * d * u.adjoint();
    const Mat4c back = e.vectors * e.values.cast<cplx>().asDiagonal() * e.vectors.adjoint();
    EXPECT_LT((back - h).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Eigensolver, RejectsNonHermitian) {
  Mat4c m = Mat4c::Identity();
  m(0, 1) = 1.0;
  try {
    eig_hermitian4(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotHermitian);
  }
}

TEST(Correlation, MaximallyMixed) {
  CorrelationTensor t;
  t(0, 0) = 1.0;
  const auto rho = density_from_correlation(t);
  EXPECT_LT((rho.matrix() - Mat4c::Identity() / 4.0).cwiseAbs().maxCoeff(), 1e-15);

  const auto back = correlation_from_density(DensityMatrix());
  EXPECT_DOUBLE_EQ(back(0, 0), 1.0);
  EXPECT_LT((back.c - Mat4(Vec4(1, 0, 0, 0).asDiagonal())).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Correlation, PsiPlusIsOneOneMinusOne) {
  const auto rho = density_from_correlation(to_correlation(XStateParams{1, 1, -1, 0}));
  const auto target = DensityMatrix::pure(ket::psi_plus());
  EXPECT_LT((rho.matrix() - target.matrix()).cwiseAbs().maxCoeff(), 1e-15);

  const auto t = correlation_from_density(target);
  EXPECT_NEAR(t(1, 1), 1.0, 1e-15);
  EXPECT_NEAR(t(2, 2), 1.0, 1e-15);
  EXPECT_NEAR(t(3, 3), -1.0, 1e-15);
  EXPECT_NEAR(t(0, 3), 0.0, 1e-15);
  EXPECT_NEAR(t(3, 0), 0.0, 1e-15);
}

TEST(Correlation, GroundState) {
  CorrelationTensor t;
  t(0, 0) = 1.0;
  t(0, 3) = t(3, 0) = -1.0;
  t(3, 3) = 1.0;
  const auto rho = density_from_correlation(t);
  const auto target = DensityMatrix::pure(ket::mm());
  EXPECT_LT((rho.matrix() - target.matrix()).cwiseAbs().maxCoeff(), 1e-15);

  const auto back = correlation_from_density(target);
  EXPECT_NEAR(back(0, 3), -1.0, 1e-15);
  EXPECT_NEAR(back(3, 0), -1.0, 1e-15);
  EXPECT_NEAR(back(3, 3), 1.0, 1e-15);
}

TEST(Correlation, RoundTripRandomStates) {
  sample::Rng rng(13);
  for (int i = 0; i < 200; ++i) {
    const auto rho = sample::density(rng);
    const auto back = density_from_correlation(correlation_from_density(rho));
    EXPECT_LT((back.matrix() - rho.matrix()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(XParams, Extraction) {
  const auto x = extract_x_params(DensityMatrix::pure(ket::psi_plus()));
  EXPECT_NEAR(x.a, 1.0, 1e-15);
  EXPECT_NEAR(x.b, 1.0, 1e-15);
  EXPECT_NEAR(x.c, -1.0, 1e-15);
  EXPECT_NEAR(x.d, 0.0, 1e-15);

  const auto z = extract_x_params(DensityMatrix());
  EXPECT_EQ(z, (XStateParams{0, 0, 0, 0}));

  CorrelationTensor t;
  t(0, 0) = 1.0;
  t(1, 2) = 0.1;
  try {
    extract_x_params(density_from_correlation(t));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotXForm);
  }
}

TEST(XParams, EmbedExtractIdentity) {
  sample::Rng rng(14);
  for (int i = 0; i < 500; ++i) {
    const auto x = sample::x_state(rng);
    const auto y = extract_x_params(density_from_correlation(to_correlation(x)));
    EXPECT_NEAR(y.a, x.a, 1e-12);
    EXPECT_NEAR(y.b, x.b, 1e-12);
    EXPECT_NEAR(y.c, x.c, 1e-12);
    EXPECT_NEAR(y.d, x.d, 1e-12);
    EXPECT_LT((to_density(x).matrix() - density_from_correlation(to_correlation(x)).matrix()).cwiseAbs().maxCoeff(),
              1e-15);
  }
}

TEST(XParams, PhysicalityBoundary) {
  EXPECT_TRUE(is_physical(XStateParams{1, 1, -1, 0}));
  EXPECT_TRUE(is_physical(XStateParams{0, 0, 1, -1}));
  EXPECT_FALSE(is_physical(XStateParams{1, 1, 1, 0}));
  EXPECT_FALSE(is_physical(XStateParams{0, 0, 0, 0.6}));
}

TEST(Entropy, Examples) {
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix::pure(ket::phi_minus())), 0.0, 1e-12);
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix()), std::log(4.0), 1e-12);

  const BellDiagonalState s{0.5, 0.5, -0.5};
  const double expect = -(3 * 0.125 * std::log(0.125) + 0.625 * std::log(0.625));
  EXPECT_NEAR(von_neumann_entropy(to_density(s)), expect, 1e-12);
  EXPECT_NEAR(von_neumann_entropy(to_density(s)), 1.0735, 1e-4);
}

TEST(Entropy, UnitaryInvariance) {
  sample::Rng rng(15);
  for (int i = 0; i < 100; ++i) {
    const auto rho = sample::density(rng);
    const Mat4c u = random_unitary4(rng);
    const Mat4c r2 = u * rho.matrix() * u.adjoint();
    const auto rotated = DensityMatrix::unchecked(0.5 * (r2 + r2.adjoint()));
    EXPECT_LT(std::abs(von_neumann_entropy(rotated) - von_neumann_entropy(rho)), 1e-10);
  }
}

TEST(Purity, Bounds) {
  EXPECT_NEAR(purity(DensityMatrix::pure(ket::pp())), 1.0, 1e-15);
  EXPECT_NEAR(purity(DensityMatrix()), 0.25, 1e-15);
}

TEST(Fidelity, Examples) {
  const auto phi = ket::phi_plus();
  EXPECT_NEAR(fidelity_pure(DensityMatrix::pure(phi), phi), 1.0, 1e-15);
  EXPECT_NEAR(fidelity_pure(DensityMatrix(), ket::pm()), 0.25, 1e-15);
  EXPECT_NEAR(fidelity_pure(DensityMatrix::pure(ket::psi_plus()), phi), 0.0, 1e-15);
  try {
    fidelity_pure(DensityMatrix(), 2.0 * phi);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotNormalized);
  }
}

TEST(DensityMatrixChecks, RejectsUnphysical) {
  Mat4c m = Mat4c::Zero();
  m.diagonal() << 1.2, -0.2, 0, 0;
  EXPECT_THROW(DensityMatrix::checked(m), Error);
  m.diagonal() << 0.5, 0.6, 0, 0;
  EXPECT_THROW(DensityMatrix::checked(m), Error);
  EXPECT_NO_THROW(DensityMatrix::checked(Mat4c::Identity() / 4.0));
}
