#include <gtest/gtest.h>

#include <erestab/trace.hpp>
#include <numbers>

using namespace erestab;

namespace {
constexpr double pi = std::numbers::pi;

PerturbationD zero_d() {
  return {[](double) { return Mat4(Mat4::Zero()); }, PerturbationD::Label::custom};
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

/// Trapezoid double sum for M_2 on an n x n grid over the triangle 0 <= s <= t <= T.
Mat4 m2_riemann(const PerturbationD& D, double e, double T, int n) {
  const double h = T / n;
  std::vector<Mat4> A(n + 1);
  for (int i = 0; i <= n; ++i) A[i] = J4() * d_hat(D, e, i * h);
  Mat4 total = Mat4::Zero();
  std::vector<Mat4> cum(n + 1);
  cum[0] = Mat4::Zero();
  for (int i = 1; i <= n; ++i) cum[i] = cum[i - 1] + 0.5 * h * (A[i - 1] + A[i]);
  for (int i = 1; i <= n; ++i) total += 0.5 * h * (A[i - 1] * cum[i - 1] + A[i] * cum[i]);
  return total;
}
}  // namespace

TEST(Trace, IteratedIntegralsOfZeroVanish) {
  EXPECT_EQ(m_iterated(zero_d(), 0.3, 1, pi).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(m_iterated(zero_d(), 0.3, 2, pi).cwiseAbs().maxCoeff(), 0.0);
  const auto [f, f2] = trace_F_and_F2(zero_d(), 0.3, boundary_data(0.3, Half::Plus));
  EXPECT_EQ(f, 0.0);
  EXPECT_EQ(f2, 0.0);
}

TEST(Trace, FirstIteratedIntegralIsLinear) {
  const auto D = d_lagrange(0.4);
  const Mat4 a = m_iterated(D, 0.4, 1, pi), b = m_iterated(D.scaled(2.0), 0.4, 1, pi);
  EXPECT_LT((b - 2 * a).cwiseAbs().maxCoeff(), 1e-9 * a.cwiseAbs().maxCoeff());
}

TEST(Trace, SecondIteratedIntegralMatchesRiemannSum) {
  const auto D = d_lagrange(0.2);
  const Mat4 q = m_iterated(D, 0.2, 2, pi), r = m2_riemann(D, 0.2, pi, 4096);
  EXPECT_LT((q - r).cwiseAbs().maxCoeff(), 1e-6 * std::max(1.0, q.cwiseAbs().maxCoeff()));
}

TEST(Trace, IteratedIntegralValidation) {
  const auto D = d_lagrange(0.2);
  EXPECT_THROW(m_iterated(D, 0.2, 3, pi), ValidationError);
  EXPECT_THROW(m_iterated(D, 0.2, 1, -1.0), ValidationError);
}

TEST(Trace, QuadraticScaling) {
  const auto D = d_tilde(0.3);
  const auto b = boundary_data(0.3, Half::Minus);
  const double base = trace_F_and_F2(D, 0.3, b).second;
  for (double s : {0.5, 2.0, -3.0}) EXPECT_LT(rel(trace_F_and_F2(D.scaled(s), 0.3, b).second, s * s * base), 1e-9);
}

TEST(Trace, EulerAndLagrangeShareTheirTraces) {
  for (auto h : {Half::Plus, Half::Minus}) {
    const auto b = boundary_data(0.35, h);
    EXPECT_LT(rel(trace_F_and_F2(d_euler(0.35), 0.35, b).second, trace_F_and_F2(d_lagrange(0.35), 0.35, b).second), 1e-12);
  }
}

TEST(Trace, DirectTraceMatchesClosedForm) {
  EXPECT_LT(rel(trace_F_and_F2(d_lagrange(0.2), 0.2, boundary_data(0.2, Half::Plus)).second, fL_plus(0.2)), 1e-6);
  EXPECT_LT(rel(trace_F_and_F2(d_lagrange(0.2), 0.2, boundary_data(0.2, Half::Minus)).second, fL_minus(0.2)), 1e-6);
}

TEST(Trace, HalfTraceMatchesClosedFormAtZero) {
  EXPECT_LT(rel(f_half(d_lagrange(0.0), 0.0, Half::Plus), fL_plus(0.0)), 1e-6);
  EXPECT_LT(rel(f_half(d_lagrange(0.0), 0.0, Half::Minus), fL_minus(0.0)), 1e-6);
}

TEST(Trace, MinusHalfDominatesPlusHalf) {
  EXPECT_LT(rel(f_half(d_lagrange(0.0), 0.0, Half::Minus), f_half(d_lagrange(0.0), 0.0, Half::Plus)), 1e-9);
  for (double e : {0.2, 0.5, 0.8}) EXPECT_GT(f_half(d_lagrange(e), e, Half::Minus), f_half(d_lagrange(e), e, Half::Plus));
}

TEST(Trace, TildeHalvesAgainstClosedForm) {
  for (double e : {0.1, 0.4, 0.7}) {
    const double m = std::max(f_half(d_tilde(e), e, Half::Plus), f_half(d_tilde(e), e, Half::Minus));
    EXPECT_LT(rel(m, f_tilde(e)), 1e-6) << "e=" << e;
  }
}

TEST(Trace, ThreeWayAgreement) {
  for (double e : {0.1, 0.3, 0.5, 0.7}) {
    for (auto h : {Half::Plus, Half::Minus}) {
      const double direct = trace_F_and_F2(d_lagrange(e), e, boundary_data(e, h)).second;
      EXPECT_LT(rel(direct, f_half(d_lagrange(e), e, h)), 1e-5);
      EXPECT_LT(rel(direct, h == Half::Plus ? fL_plus(e) : fL_minus(e)), 1e-5);
    }
    const double direct = trace_F_and_F2(d_tilde(e), e, boundary_data(e, Half::Minus)).second;
    EXPECT_LT(rel(direct, f_half(d_tilde(e), e, Half::Minus)), 1e-5);
    EXPECT_LT(rel(direct, f_tilde(e)), 1e-5);
  }
}

TEST(Trace, PrintedMinusIndexRangeDisagrees) {
  const double verbatim = f_half(d_lagrange(0.1), 0.1, Half::Minus, MinusIndexSet::Verbatim);
  const double direct = trace_F_and_F2(d_lagrange(0.1), 0.1, boundary_data(0.1, Half::Minus)).second;
  EXPECT_GT(rel(verbatim, direct), 1e-2);
}

TEST(Trace, BoundaryProjectors) {
  for (double e : {0.0, 0.5}) {
    const auto p = boundary_data(e, Half::Plus), m = boundary_data(e, Half::Minus);
    EXPECT_LT((p.Gamma - Mat4(Eigen::Vector4d(1, 0, 0, 1).asDiagonal())).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((m.Gamma - Mat4(Eigen::Vector4d(1, 1, 0, 0).asDiagonal())).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Trace, CaptionValuesThatAreReproduced) {
  auto lagrange = [](double g) { return 9 - std::pow(3 - 1 / std::sqrt(g), 2); };
  EXPECT_NEAR(lagrange(gL_minus(0.0)), 0.7469, 5e-4);
  EXPECT_NEAR(1 / (2 * std::sqrt(gL_minus(0.0))), 0.0636, 5e-4);
  EXPECT_NEAR(bound_curve(BoundFamily::Euler, 0.0, true), 0.0636, 5e-4);
  EXPECT_NEAR(1 / std::sqrt(f_tilde(0.0)), 0.0523, 5e-4);
  EXPECT_NEAR(1 / std::sqrt(g_tilde_check(0.1)), 0.0189, 5e-4);
  EXPECT_NEAR(1 / std::sqrt(g_tilde_hat(0.1)), 0.0187, 5e-4);
}

TEST(Trace, EulerCurveIsDerivedFromLagrangeTraces) {
  for (double e : {0.0, 0.3, 0.6}) {
    const double f = std::max(fL_plus(e), fL_minus(e));
    EXPECT_NEAR(bound_curve(BoundFamily::Euler, e, false), 1 / (2 * std::sqrt(f)), 1e-15);
  }
}

TEST(Trace, DominationOnGrid) {
  for (int i = 0; i < 50; ++i) {
    const double e = 0.95 * i / 49;
    EXPECT_LE(fL_plus(e), gL_plus(e) * (1 + 1e-12)) << "e=" << e;
    EXPECT_LE(fL_minus(e), gL_minus(e) * (1 + 1e-12)) << "e=" << e;
    EXPECT_LE(f_tilde(e), g_tilde(e) * (1 + 1e-12)) << "e=" << e;
  }
}

TEST(Trace, RhoBracketsContainTheIntegrals) {
  for (int i = 0; i < 50; ++i) {
    const double e = 0.95 * i / 49;
    const auto r = rho_integrals(e);
    const auto b = rho_bracket(e);
    const double tol = 1e-12 * std::max(1.0, r.rho3);
    EXPECT_LE(b.rho1_lo, r.rho1 + tol);
    EXPECT_GE(b.rho1_hi, r.rho1 - tol);
    EXPECT_LE(b.rho2_lo, r.rho2 + tol);
    EXPECT_GE(b.rho2_hi, r.rho2 - tol);
    EXPECT_GE(b.rho3_hi, r.rho3 - tol);
  }
}

TEST(Trace, Rho0BoundsAndTheFailingMiddleBound) {
  for (double e : {0.1, 0.5, 0.9})
    for (double th = 0.0; th <= pi; th += pi / 64) {
      EXPECT_LE(rho0(e, th), closed::rho0_upper(e, th) * (1 + 1e-14) + 1e-15);
      EXPECT_GE(rho0(e, th), closed::rho0_lower(e, th) - 1e-14);
    }
  EXPECT_LT(closed::rho0_upper_printed_middle(0.5, pi), rho0(0.5, pi));
}

TEST(Trace, BoundsArePositive) {
  for (double e = 0.0; e <= 0.99; e += 0.03)
    for (auto k : {BoundKind::fL_plus, BoundKind::fL_minus, BoundKind::fL_max, BoundKind::gL_plus, BoundKind::gL_minus,
                   BoundKind::f_tilde, BoundKind::g_tilde})
      EXPECT_GT(closed_form_bound(k, e).value, 0.0) << to_string(k) << " e=" << e;
}

TEST(Trace, ContinuityAtTheSeriesSwitch) {
  const double lo = std::nextafter(closed::kSwitch, 0.0), hi = closed::kSwitch;
  for (auto k : {BoundKind::fL_plus, BoundKind::fL_minus, BoundKind::gL_plus, BoundKind::gL_minus, BoundKind::f_tilde,
                 BoundKind::g_tilde}) {
    const double a = closed_form_bound(k, lo).value, b = closed_form_bound(k, hi).value;
    EXPECT_LT(rel(a, b), 1e-8) << to_string(k);
  }
}

TEST(Trace, SwitchPointValidation) {
  EXPECT_THROW(gL_minus(0.2, 0.0), ValidationError);
  EXPECT_THROW(g_tilde(0.2, 0.9), ValidationError);
  EXPECT_NO_THROW(g_tilde(0.2, e0_max()));
}

TEST(Trace, GonRegionMembership) {
  EXPECT_THROW(gon_region_member(8, 1000.0, 0.1), ValidationError);
  EXPECT_FALSE(gon_region_member(9, 2 * q_max(9), 0.0));
  EXPECT_FALSE(gon_region_member(9, 9.0, 0.0));
  EXPECT_TRUE(gon_region_member(9, 1e5, 0.0));
}
