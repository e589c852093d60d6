#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <erestab/kepler.hpp>
#include <erestab/ode.hpp>
#include <numbers>
#include <random>

using namespace erestab;

namespace {
constexpr double pi = std::numbers::pi;

double rho0_by_quadrature(double e, double theta) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [e](double t) { return 1 / std::pow(1 + e * std::cos(t), 2); }, 0.0, theta, 15, 1e-13);
}
}  // namespace

TEST(Kepler, EccentricityDomain) {
  EXPECT_NO_THROW(Eccentricity{0.0});
  EXPECT_NO_THROW(Eccentricity{0.999});
  EXPECT_THROW(Eccentricity{1.0}, ValidationError);
  EXPECT_THROW(Eccentricity{-0.1}, ValidationError);
  EXPECT_THROW(Eccentricity{NAN}, ValidationError);
}

TEST(Kepler, Rho0ClosedFormMatchesQuadrature) {
  for (double e : {0.0, 0.3, 0.6, 0.9})
    for (double th : {0.0, 0.5, 2.0, pi, 4.0, 5.5, 2 * pi}) {
      const double want = rho0_by_quadrature(e, th);
      EXPECT_NEAR(rho0(e, th), want, 1e-12 * std::max(1.0, want)) << "e=" << e << " theta=" << th;
    }
  for (double th : {0.3, 3.0, 6.0}) EXPECT_DOUBLE_EQ(rho0(0.0, th), th);
  EXPECT_EQ(rho0(0.5, 0.0), 0.0);
  for (double e : {0.2, 0.7}) EXPECT_NEAR(rho0(e, 2 * pi), 2 * pi / std::pow(1 - e * e, 1.5), 1e-12);
}

TEST(Kepler, Rho0IsContinuousAcrossPi) {
  for (double e : {0.3, 0.9}) EXPECT_NEAR(rho0(e, pi - 1e-9), rho0(e, pi + 1e-9), 1e-6);
}

TEST(Kepler, RhoIntegrals) {
  const auto r0 = rho_integrals(0.0);
  EXPECT_NEAR(r0.rho1, pi * pi / 2, 1e-12);
  EXPECT_NEAR(r0.rho2, pi * pi / 2, 1e-12);
  EXPECT_NEAR(r0.rho3, pi * pi * pi / 6, 1e-12);
  for (double e : {0.05, 0.2, 0.5, 0.8}) EXPECT_GE(rho_integrals(e).rho2, pi * pi / 2 - 2 * e);
}

TEST(Kepler, BKepEntries) {
  const Mat4 b0 = b_kep(0.0, 1.234);
  EXPECT_NEAR(b0(2, 2), -2, 1e-15);
  EXPECT_NEAR(b0(3, 3), 1, 1e-15);
  const Mat4 b9 = b_kep(0.9, pi);
  EXPECT_NEAR(b9(2, 2), -29, 1e-10);
  EXPECT_NEAR(b9(3, 3), 1, 1e-15);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> ue(0, 0.99), ut(0, 2 * pi);
  for (int i = 0; i < 100; ++i) {
    const Mat4 b = b_kep(ue(rng), ut(rng));
    EXPECT_EQ((b - b.transpose()).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Kepler, GammaAtZeroAndPi) {
  for (double e : {0.0, 0.4, 0.9}) EXPECT_LT((gamma_kep(e, 0.0).matrix - Mat4::Identity()).cwiseAbs().maxCoeff(), 1e-14);
  const Mat4 g = gamma_kep(0.0, pi).matrix;
  EXPECT_NEAR(g(0, 3), 2, 1e-14);
  EXPECT_NEAR(g(1, 1), -3, 1e-14);
  EXPECT_NEAR(g(2, 2), 3, 1e-14);
}

TEST(Kepler, GammaAtTwoPiStructure) {
  const Mat4 g = gamma_kep(0.3, 2 * pi).matrix;
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(g(i, i), 1, 1e-12);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      const bool allowed = (i == 0 && (j == 1 || j == 2)) || (i == 3 && (j == 1 || j == 2));
      if (!allowed) EXPECT_NEAR(g(i, j), 0, 1e-12) << i << "," << j;
      else EXPECT_GT(std::abs(g(i, j)), 1e-3) << i << "," << j;
    }
  // rank(gamma - I) = 1, so the eigenvalue 1 has a 3-dimensional eigenspace
  for (double e : {0.0, 0.3, 0.6, 0.9}) {
    const Mat4 m = gamma_kep(e, 2 * pi).matrix - Mat4::Identity();
    const Eigen::Vector4d s = Eigen::JacobiSVD<Mat4>(m).singularValues();
    EXPECT_GT(s[0], 1.0);
    EXPECT_LT(s[1], 1e-10 * s[0]) << "e=" << e;
  }
}

TEST(Kepler, GammaIsSymplecticWithUnitDeterminant) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> ue(0, 0.95), ut(0, 2 * pi);
  for (int i = 0; i < 1000; ++i) {
    const double e = ue(rng), th = ut(rng);
    const Mat4 g = gamma_kep(e, th).matrix;
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    EXPECT_LT(symplectic_defect(g), 1e-9 * scale * scale);
    EXPECT_NEAR(g.determinant(), 1.0, 1e-9 * std::pow(scale, 4));
  }
}

TEST(Kepler, ClosedFormMatchesOde) {
  EssentialSystem sys;
  sys.blocks.push_back({2, Matrix(kepler_R())});
  for (double e : {0.0, 0.3, 0.6, 0.9}) {
    sys.e = e;
    const auto sol = integrate_fundamental(sys, 2 * pi, 1e-13, 1e-13);
    for (int i = 0; i < 32; ++i) {
      const double th = 2 * pi * i / 31;
      EXPECT_LT((gamma_kep(e, th).matrix - sol.at(th)).cwiseAbs().maxCoeff(), 1e-8) << "e=" << e << " theta=" << th;
    }
  }
}

TEST(Kepler, Residuals) {
  EXPECT_LT(kepler_residual(0.0, 64, DerivativeMethod::CentralDifference), 1e-6);
  EXPECT_LT(kepler_residual(0.5, 64, DerivativeMethod::CentralDifference), 1e-6);
  EXPECT_LT(kepler_residual(0.95, 256, DerivativeMethod::CentralDifference), 1e-5);
  for (double e : {0.0, 0.5, 0.95}) EXPECT_LT(kepler_residual(e, 256), 1e-9);
  EXPECT_THROW(kepler_residual(0.5, 4), ValidationError);
}

TEST(Kepler, FirstIntegralSolutions) {
  const double e = 0.35;
  const auto f0 = first_integral_solutions(e, 0.0);
  EXPECT_NEAR(f0.xi_C[0], -e - 1, 1e-15);
  EXPECT_NEAR(f0.xi_C[1], 0, 1e-15);
  EXPECT_NEAR(f0.xi_C[2], 0, 1e-15);
  EXPECT_NEAR(f0.xi_C[3], 1 / (1 + e), 1e-15);
  const auto f1 = first_integral_solutions(e, 2 * pi);
  EXPECT_LT((f0.xi_H - f1.xi_H).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((f0.xi_C - f1.xi_C).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((f0.xi_A2 - f1.xi_A2).cwiseAbs().maxCoeff(), 1e-12);

  // y' = J D^2 H_K y in time, with dtheta/dt = (1 + e cos theta)^2
  constexpr double h = 1e-6;
  for (double ev : {0.0, 0.35, 0.8})
    for (double th : {0.3, 1.7, 3.0, 4.4}) {
      const auto p = first_integral_solutions(ev, th + h), m = first_integral_solutions(ev, th - h),
                 c = first_integral_solutions(ev, th);
      const Mat4 A = J4() * kepler_hessian(ev, th) / std::pow(1 + ev * std::cos(th), 2);
      EXPECT_LT(((p.xi_H - m.xi_H) / (2 * h) - A * c.xi_H).cwiseAbs().maxCoeff(), 1e-6);
      EXPECT_LT(((p.xi_C - m.xi_C) / (2 * h) - A * c.xi_C).cwiseAbs().maxCoeff(), 1e-6);
      EXPECT_LT(((p.xi_A2 - m.xi_A2) / (2 * h) - A * c.xi_A2).cwiseAbs().maxCoeff(), 1e-6);
      EXPECT_LT(((p.xi_h - m.xi_h) / (2 * h) - A * c.xi_h).cwiseAbs().maxCoeff(), 1e-6);
    }
}
