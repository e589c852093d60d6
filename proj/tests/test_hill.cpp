#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <erestab/hill.hpp>
#include <erestab/trace.hpp>
#include <numbers>

using namespace erestab;

namespace {
constexpr double pi = std::numbers::pi;

SturmLiouvilleSpec kepler_spec(double e) { return {2, Matrix(kepler_R()), e}; }
}  // namespace

TEST(Hill, FourierCoefficients) {
  EXPECT_NEAR(hill_coefficient(0.6, 0), 1.25, 1e-15);
  for (double e : {0.3, 0.9})
    for (int k = -10; k <= 10; ++k) {
      const double q = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                           [&](double t) { return std::cos(k * t) / (1 + e * std::cos(t)); }, 0.0, 2 * pi, 15, 1e-13) /
                       (2 * pi);
      EXPECT_NEAR(hill_coefficient(e, k), q, 1e-10) << "e=" << e << " k=" << k;
    }
}

TEST(Hill, CircularKeplerDecouplesModes) {
  const auto h = assemble_hill(kepler_spec(0.0), 1, 8);
  const Eigen::Index n = static_cast<Eigen::Index>(h.modes.size());
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      if (r != c) EXPECT_EQ(h.matrix.block(2 * r, 2 * c, 2, 2).cwiseAbs().maxCoeff(), 0.0);
  const Eigen::Index zero = 8;  // j = 0 sits in the middle of -8..8
  ASSERT_EQ(h.modes[zero], 0.0);
  const Eigen::MatrixXcd b = h.matrix.block(2 * zero, 2 * zero, 2, 2);
  EXPECT_NEAR(b(0, 0).real(), 3, 1e-15);
  EXPECT_NEAR(std::abs(b(1, 1)), 0, 1e-15);
  EXPECT_EQ(std::abs(b(0, 1)), 0.0);
}

TEST(Hill, MatricesAreHermitian) {
  for (double e : {0.0, 0.5, 0.9})
    for (int omega : {1, -1})
      for (const auto& R : {Matrix(kepler_R()), Matrix(alpha_eta_R(1.3, 0.4))}) {
        const auto h = assemble_hill({2, R, e}, omega, 16);
        EXPECT_LT((h.matrix - h.matrix.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
      }
}

TEST(Hill, ValidatesInput) {
  EXPECT_THROW(assemble_hill(kepler_spec(0.2), 1, 4), ValidationError);
  EXPECT_THROW(assemble_hill(kepler_spec(0.2), 2, 16), ValidationError);
  EXPECT_THROW(assemble_hill({2, Matrix::Identity(3, 3), 0.2}, 1, 16), ValidationError);
  EXPECT_THROW(assemble_hill({3, Matrix::Identity(3, 3), 0.2}, 1, 16), ValidationError);
  EXPECT_THROW(assemble_hill(kepler_spec(1.0), 1, 16), ValidationError);
}

TEST(Hill, KeplerIndices) {
  for (double e : {0.0, 0.5, 0.9}) {
    const auto p = morse_index(kepler_spec(e), 1);
    EXPECT_EQ(p.morse, 0) << "e=" << e;
    EXPECT_EQ(p.nullity, 3) << "e=" << e;
    const auto m = morse_index(kepler_spec(e), -1);
    EXPECT_EQ(m.morse, 2) << "e=" << e;
    EXPECT_EQ(m.nullity, 0) << "e=" << e;
  }
}

TEST(Hill, TruncationConvergenceFromSixtyFour) {
  for (double e : {0.0, 0.5, 0.9})
    for (int omega : {1, -1}) {
      const auto a = count_index(kepler_spec(e), omega, 64), b = count_index(kepler_spec(e), omega, 128);
      EXPECT_EQ(a.morse, b.morse);
      EXPECT_EQ(a.nullity, b.nullity);
    }
}

TEST(Hill, LagrangeAtMaximalMassIsPositive) {
  for (double e : {0.0, 0.5})
    for (int omega : {1, -1}) {
      const auto r = morse_index({2, Matrix(1.5 * Matrix::Identity(2, 2)), e}, omega, 64);
      EXPECT_EQ(r.morse, 0) << "e=" << e << " omega=" << omega;
    }
}

TEST(Hill, HeavyCentralMassGonHasZeroIndex) {
  const auto sys = essential_system(family::Gon{9, 100.0, std::nullopt}, 0.0);
  EXPECT_EQ(morse_index(sys, 1, 32).morse, 0);
}

TEST(Hill, BlockAdditivity) {
  const Matrix R1 = essential_R(family::Euler{0.8}).front(), R2 = essential_R(family::AlphaEta{1.2, 0.5}).front();
  Matrix R = Matrix::Zero(4, 4);
  R.topLeftCorner(2, 2) = R1;
  R.bottomRightCorner(2, 2) = R2;
  for (double e : {0.0, 0.4})
    for (int omega : {1, -1}) {
      const auto a = count_index({2, R1, e}, omega, 48), b = count_index({2, R2, e}, omega, 48);
      const auto c = count_index({4, R, e}, omega, 48);
      EXPECT_EQ(c.morse, a.morse + b.morse);
      EXPECT_EQ(c.nullity, a.nullity + b.nullity);
    }
}

TEST(Hill, GeneralizedEigenvaluesAreRealForPositiveBase) {
  for (double e : {0.0, 0.5})
    for (int omega : {1, -1}) {
      const auto k = generalized_eigs({2, Matrix(1.5 * Matrix::Identity(2, 2)), e}, Matrix(n_tilde()), omega, 32);
      ASSERT_FALSE(k.empty());
      for (const auto& x : k) EXPECT_LE(std::abs(x.imag()), 1e-7);
    }
}

TEST(Hill, ZeroBumpHasNoGeneralizedEigenvalues) {
  EXPECT_TRUE(generalized_eigs({2, Matrix(1.5 * Matrix::Identity(2, 2)), 0.3}, Matrix::Zero(2, 2), 1, 16).empty());
}

TEST(Hill, DegenerateBaseIsRejected) {
  EXPECT_THROW(generalized_eigs(kepler_spec(0.3), Matrix(n_tilde()), 1, 16), InvalidState);
}

TEST(Hill, InverseSquaresApproachTheTraces) {
  // D_L = N-tilde / (2 (1 + e cos)) enters with R = diag(3, 0) and bump weight N-tilde / 2
  const double e = 0.3;
  const double target = fL_plus(e) + fL_minus(e);
  double prev = 0;
  for (int K : {32, 64, 128}) {
    double s = 0;
    for (const auto& k : generalized_eigs(kepler_spec(e), Matrix(0.5 * n_tilde()), -1, K)) s += std::real(1.0 / (k * k));
    EXPECT_LE(s, target * (1 + 1e-9));
    EXPECT_GE(s, prev - 1e-9 * target);
    EXPECT_GT(s, 0.95 * target);
    prev = s;
  }
}

TEST(Hill, KeplerSmallestKappaRespectsTildeBound) {
  const auto k = generalized_eigs(kepler_spec(0.0), Matrix::Identity(2, 2), -1, 32);
  ASSERT_FALSE(k.empty());
  EXPECT_LE(1 / std::norm(k.front()), f_tilde(0.0));
}

TEST(Hill, NonConvergenceCarriesBothResults) {
  IndexResult a, b;
  a.morse = 1;
  b.morse = 2;
  const IndexNotConverged x(a, b);
  EXPECT_EQ(x.coarse.morse, 1);
  EXPECT_EQ(x.fine.morse, 2);
}
