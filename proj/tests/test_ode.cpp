#include <gtest/gtest.h>

#include <erestab/configurations.hpp>
#include <erestab/ode.hpp>
#include <numbers>

using namespace erestab;

namespace {
constexpr double two_pi = 2 * std::numbers::pi;

EssentialSystem system_of(const FamilySpec& f, double e) { return essential_system(f, e); }
}  // namespace

TEST(Ode, HarmonicOscillatorAgainstExactSolution) {
  // y'' = -y as a first-order system
  auto rhs = [](double, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    dy.resize(2);
    dy[0] = y[1];
    dy[1] = -y[0];
  };
  OdeOptions opt;
  const auto sol = integrate_dop853(rhs, 0.0, Eigen::Vector2d(1, 0), 10.0, opt);
  EXPECT_NEAR(sol.y_final[0], std::cos(10.0), 1e-10);
  EXPECT_NEAR(sol.y_final[1], -std::sin(10.0), 1e-10);
  for (double t : {0.5, 3.3, 7.9}) EXPECT_NEAR(sol.dense(t)[0], std::cos(t), 1e-9);
}

TEST(Ode, KeplerMonodromyMatchesClosedForm) {
  const auto res = monodromy(system_of(family::Kepler{}, 0.5));
  EXPECT_LT((res.matrix - gamma_kep(0.5, two_pi).matrix).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Ode, LagrangeAtZeroMassIsKepler) {
  for (double e : {0.0, 0.4}) {
    const auto a = monodromy(system_of(family::Lagrange{0.0}, e)).matrix;
    const auto b = monodromy(system_of(family::Kepler{}, e)).matrix;
    EXPECT_EQ((a - b).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Ode, ShortIntervalIsNearIdentity) {
  const auto sol = integrate_fundamental(system_of(family::Euler{1.0}, 0.3), 1e-9);
  EXPECT_LT((sol.at_end() - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Ode, ClassificationsOfKnownPoints) {
  EXPECT_EQ(*monodromy(system_of(family::Lagrange{0.3}, 0.2)).blocks[0].classification, StabilityClass::EE);
  EXPECT_EQ(*monodromy(system_of(family::Euler{0.03}, 0.1)).blocks[0].classification, StabilityClass::EH);
}

TEST(Ode, LagrangeAtMaximalMassHasRealSpectrum) {
  const auto res = monodromy(system_of(family::Lagrange{9.0}, 0.0));
  const auto cls = *res.blocks[0].classification;
  EXPECT_TRUE(cls == StabilityClass::Degenerate || cls == StabilityClass::HH || cls == StabilityClass::EH) << to_string(cls);
  for (const auto& l : eigenvalues(res.matrix)) EXPECT_LT(std::abs(l.imag()), 1e-6);
}

TEST(Ode, SymplecticDriftIsSmallForAllFamilies) {
  const std::vector<FamilySpec> fams{family::Kepler{}, family::Lagrange{0.7}, family::Euler{0.05},
                                     family::AlphaEta{1.5, 0.03}, family::Gon{9, 800.0, std::nullopt}};
  for (const auto& f : fams)
    for (double e : {0.0, 0.5, 0.9, 0.99}) {
      const auto res = monodromy(system_of(f, e));
      for (const auto& b : res.blocks) {
        const double s = std::max(1.0, b.matrix.cwiseAbs().maxCoeff());
        EXPECT_LT(symplectic_defect(b.matrix), 100 * 1e-12 * s * s) << family_label(f) << " e=" << e;
      }
    }
}

TEST(Ode, TighterToleranceChangesLittle) {
  const auto sys = system_of(family::Lagrange{0.5}, 0.6);
  const auto a = integrate_fundamental(sys, two_pi, 1e-10, 1e-10).result();
  const auto b = integrate_fundamental(sys, two_pi, 5e-11, 5e-11).result();
  const double change = (a.matrix - b.matrix).cwiseAbs().maxCoeff();
  EXPECT_LT(change, std::max(a.stats.error_estimate, 1e-9));
}

TEST(Ode, BackwardIntegrationReturnsToIdentity) {
  const auto sys = system_of(family::Euler{0.4}, 0.5);
  const auto fwd = integrate_fundamental(sys, two_pi).result();
  OdeOptions opt;
  const auto back = integrate_block(sys.e, sys.blocks[0].R, two_pi, fwd.matrix, 0.0, opt);
  const Matrix end = Eigen::Map<const Matrix>(back.y_final.data(), 4, 4);
  const double s = std::max(1.0, fwd.matrix.cwiseAbs().maxCoeff());
  EXPECT_LT((end - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 10 * 1e-12 * s * s);
}

TEST(Ode, DenseOutputMatchesRestartedIntegration) {
  const auto sys = system_of(family::AlphaEta{1.4, 0.2}, 0.7);
  const auto sol = integrate_fundamental(sys, two_pi);
  const auto part = integrate_fundamental(sys, 2.5);
  EXPECT_LT((sol.at(2.5) - part.at_end()).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Ode, BlockSumMatchesDiamond) {
  const auto sys = system_of(family::Gon{9, 1000.0, std::nullopt}, 0.2);
  const auto res = monodromy(sys);
  ASSERT_EQ(res.blocks.size(), 4u);
  Matrix d = res.blocks[0].matrix;
  for (std::size_t i = 1; i < res.blocks.size(); ++i) d = diamond(d, res.blocks[i].matrix);
  EXPECT_EQ((d - res.matrix).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(res.matrix.rows(), sys.dimension());
}

TEST(Ode, ValidatesInput) {
  auto sys = system_of(family::Kepler{}, 0.3);
  EXPECT_THROW(integrate_fundamental(sys, 0.0), ValidationError);
  EXPECT_THROW(integrate_fundamental(sys, 7.0), ValidationError);
  EXPECT_THROW(integrate_fundamental(sys, two_pi, 1e-16, 1e-12), ValidationError);
  sys.blocks[0].R(0, 1) = 1.0;
  EXPECT_THROW(monodromy(sys), ValidationError);
  EssentialSystem empty;
  EXPECT_THROW(monodromy(empty), ValidationError);
}

TEST(Ode, WarnsAboveHighEccentricity) {
  const auto res = monodromy(system_of(family::Lagrange{0.2}, 0.995));
  EXPECT_FALSE(res.warnings.empty());
}
