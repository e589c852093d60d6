#include <gtest/gtest.h>

#include <erestab/configurations.hpp>
#include <numbers>

using namespace erestab;

namespace {
constexpr double pi = std::numbers::pi;
double csc(double x) { return 1 / std::sin(x); }
}  // namespace

TEST(Configurations, EssentialRMatrices) {
  EXPECT_TRUE(essential_R(family::Lagrange{0.0}).front().isApprox(Matrix(kepler_R())));
  EXPECT_TRUE(essential_R(family::Lagrange{9.0}).front().isApprox(Matrix(1.5 * Matrix::Identity(2, 2))));
  const Matrix e7 = essential_R(family::Euler{7.0}).front();
  EXPECT_DOUBLE_EQ(e7(0, 0), 17);
  EXPECT_DOUBLE_EQ(e7(1, 1), -7);
  EXPECT_TRUE(essential_R(family::AlphaEta{1.5, 1.5}).front().isApprox(Matrix(kepler_R())));
}

TEST(Configurations, TraceIdentities) {
  for (double b = 0; b <= 9; b += 0.25) EXPECT_NEAR(essential_R(family::Lagrange{b}).front().trace(), 3, 1e-14);
  for (double b = 0; b <= 7; b += 0.25) EXPECT_NEAR(essential_R(family::Euler{b}).front().trace(), b + 3, 1e-14);
}

TEST(Configurations, ValidatesParameters) {
  EXPECT_THROW(essential_R(family::Lagrange{9.5}), ValidationError);
  EXPECT_THROW(essential_R(family::Euler{-1}), ValidationError);
  EXPECT_THROW(essential_R(family::AlphaEta{0.5, 0.1}), ValidationError);
  EXPECT_THROW(essential_R(family::Gon{2, 10.0, std::nullopt}), ValidationError);
  EXPECT_THROW(essential_R(family::Gon{9, 0.0, std::nullopt}), ValidationError);
  EXPECT_THROW(essential_R(family::Gon{9, 10.0, 5}), ValidationError);
  EXPECT_THROW(gon_data(9, -1), ValidationError);
}

TEST(Configurations, Zeta) {
  EXPECT_DOUBLE_EQ(zeta(1.5, 1.5), 0);
  EXPECT_DOUBLE_EQ(zeta(1, 0), 2);
  EXPECT_DOUBLE_EQ(zeta(2, 2), 1);
}

TEST(Configurations, GonSigmaAndQmax) {
  EXPECT_NEAR(gon_data(3, 1.0).sigma_n, 2 / std::sqrt(3.0), 1e-14);
  EXPECT_NEAR(q_max(9), 4.9047, 1e-4);
  for (int n = 3; n <= 12; ++n) {
    double s = 0;
    for (int i = 1; i < n; ++i) s += csc(pi * i / n);
    EXPECT_NEAR(gon_data(n, 2.0).sigma_n, s / 2, 1e-13);
  }
}

TEST(Configurations, GonBlocksAreSymmetricWithExpectedShapes) {
  for (int n = 3; n <= 12; ++n) {
    const auto g = gon_data(n, 5.0);
    ASSERT_EQ(static_cast<int>(g.blocks.size()), n / 2);
    for (const auto& b : g.blocks) {
      EXPECT_LT((b.U - b.U.transpose()).cwiseAbs().maxCoeff(), 1e-14);
      EXPECT_EQ(b.U.rows(), (2 * b.l == n) ? 2 : 4);
    }
  }
}

TEST(Configurations, PrintedAlphaHatForNine) {
  for (double m : {10.0, 100.0, 1000.0}) {
    const auto env = alpha_eta_envelope(9, m);
    const double want =
        1 + 3 * (m + 9) / (6 * m + 2 * std::sqrt(3.0) + 3 * csc(pi / 9) + 3 * csc(2 * pi / 9) + 3 / std::cos(pi / 18));
    EXPECT_NEAR(env.blocks.front().plus.alpha_hat, want, 1e-12) << "m=" << m;
    EXPECT_DOUBLE_EQ(env.blocks.front().plus.eta_check, -env.blocks.front().minus.eta_check);
  }
}

TEST(Configurations, ExactEnvelopeForEvenMiddleBlock) {
  for (int n : {4, 6, 10, 12}) {
    const auto env = alpha_eta_envelope(n, 3.0);
    const auto& last = env.blocks.back();
    EXPECT_TRUE(last.exact);
    EXPECT_DOUBLE_EQ(last.plus.alpha_check, last.plus.alpha_hat);
  }
}

TEST(Configurations, EnvelopeOrderingIsPositiveSemidefinite) {
  for (int n = 3; n <= 12; ++n)
    for (double m : {1.0, 10.0, 100.0}) {
      const auto g = gon_data(n, m);
      const auto env = alpha_eta_envelope(g);
      for (std::size_t i = 0; i < g.blocks.size(); ++i) {
        if (env.blocks[i].l == 1) continue;  // see EnvelopeOrderingForFirstBlock
        const auto [lo, hi] = envelope_matrices(env.blocks[i]);
        const Matrix R = g.blocks[i].R;
        const double tol = 1e-12;
        EXPECT_GE(Eigen::SelfAdjointEigenSolver<Matrix>(R - lo).eigenvalues().minCoeff(), -tol) << n << " " << m;
        EXPECT_GE(Eigen::SelfAdjointEigenSolver<Matrix>(hi - R).eigenvalues().minCoeff(), -tol) << n << " " << m;
      }
    }
}

TEST(Configurations, XiDecreasesInMassAndVanishes) {
  double prev = INFINITY;
  for (double m = 2 * q_max(9) * 1.01; m < 1e6; m *= 1.3) {
    const double x = xi_gon(9, m);
    EXPECT_LE(x, prev * (1 + 1e-12)) << "m=" << m;
    prev = x;
  }
  EXPECT_LE(xi_gon(9, 1e8), 1e-3);
}

TEST(Configurations, EssentialSystemBlocks) {
  const auto sys = essential_system(family::Gon{9, 100.0, std::nullopt}, 0.2);
  EXPECT_EQ(sys.blocks.size(), 4u);
  EXPECT_EQ(sys.dimension(), 32);
  const auto one = essential_system(family::Gon{9, 100.0, 2}, 0.2);
  ASSERT_EQ(one.blocks.size(), 1u);
  EXPECT_TRUE(one.blocks[0].R.isApprox(sys.blocks[1].R));
  const auto even = essential_system(family::Gon{10, 100.0, std::nullopt}, 0.0);
  EXPECT_EQ(even.blocks.back().k, 2);
}
