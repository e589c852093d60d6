#pragma once

// Trace formulas for perturbations of the Kepler system, the half-period trace functions,
// and the bound curves built on them.

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <utility>

#include "closed_forms.hpp"
#include "configurations.hpp"
#include "detail/matrix_quadrature.hpp"
#include "kepler.hpp"

namespace erestab {

/// A symmetric 4x4 perturbation D(theta) of B_Kep.
struct PerturbationD {
  enum class Label { D_L, D_E, D_tilde, custom };
  std::function<Mat4(double)> evaluator;
  Label label = Label::custom;

  Mat4 operator()(double theta) const { return evaluator(theta); }
  PerturbationD scaled(double sigma) const {
    auto f = evaluator;
    return {[f, sigma](double t) { return Mat4(sigma * f(t)); }, Label::custom};
  }
};

inline PerturbationD d_lagrange(Eccentricity e) {
  const double ev = e;
  return {[ev](double t) {
            Mat4 D = Mat4::Zero();
            const double s = 1.0 / (2 * (1 + ev * std::cos(t)));
            D(2, 2) = s;
            D(3, 3) = -s;
            return D;
          },
          PerturbationD::Label::D_L};
}

inline PerturbationD d_euler(Eccentricity e) {
  auto l = d_lagrange(e);
  return {[f = l.evaluator](double t) { return Mat4(-f(t)); }, PerturbationD::Label::D_E};
}

inline PerturbationD d_tilde(Eccentricity e) {
  const double ev = e;
  return {[ev](double t) {
            Mat4 D = Mat4::Zero();
            D(2, 2) = D(3, 3) = 1.0 / (1 + ev * std::cos(t));
            return D;
          },
          PerturbationD::Label::D_tilde};
}

/// D-hat(t) = gamma_Kep(t)^T D(t) gamma_Kep(t).
inline Mat4 d_hat(const PerturbationD& D, Eccentricity e, double t) {
  const Mat4 g = gamma_kep(e, t).matrix;
  return g.transpose() * D(t) * g;
}

namespace detail {
inline constexpr double kTraceAbsTol = 1e-9;
inline constexpr double kTraceRelTol = 1e-11;

inline Mat4 cumulative(const std::function<Mat4(double)>& f, double t) {
  if (t <= 0) return Mat4::Zero();
  return integrate_matrix([&](double s) -> Eigen::MatrixXd { return f(s); }, 0.0, t, 1e-2 * kTraceAbsTol,
                          1e-2 * kTraceRelTol)
      .value;
}
}  // namespace detail

/// M_1 = int_0^T J D-hat, M_2 = int_0^T J D-hat(t1) M_1(t1) dt1.
inline Mat4 m_iterated(const PerturbationD& D, Eccentricity e, int j, double T) {
  if (!(T > 0 && T <= 2 * std::numbers::pi + 1e-12)) throw ValidationError("T must lie in (0, 2 pi]");
  if (j != 1 && j != 2) throw ValidationError("only M_1 and M_2 are implemented");
  const Mat4 J = J4();
  std::function<Mat4(double)> jd = [&](double t) -> Mat4 { return J * d_hat(D, e, t); };
  if (j == 1)
    return detail::integrate_matrix([&](double t) -> Eigen::MatrixXd { return jd(t); }, 0.0, T,
                                    detail::kTraceAbsTol, detail::kTraceRelTol)
        .value;
  return detail::integrate_matrix(
             [&](double t) -> Eigen::MatrixXd { return jd(t) * detail::cumulative(jd, t); }, 0.0, T,
             detail::kTraceAbsTol, detail::kTraceRelTol)
      .value;
}

enum class Half { Plus, Minus };

inline std::string to_string(Half h) { return h == Half::Plus ? "plus" : "minus"; }

struct BoundaryData {
  Half half;
  Eigen::Matrix<double, 4, 2> Z0, Z1;
  Mat4 P, Q_d, script_P, Gamma;
};

/// The conjugator that block-diagonalises P^{-1} for each half, as printed.
inline Mat4 script_P(Eccentricity e, Half h) {
  const double ev = e, pi = std::numbers::pi;
  Mat4 S;
  if (h == Half::Plus) {
    const double k = 3 * (1 + ev) * pi / (2 * (1 - ev) * std::pow(1 - ev * ev, 1.5));
    S << 0, 1 / (1 + ev), k, 0,  //
        1, 0, 0, 0,              //
        -(1 + ev), 0, 0, 1,      //
        0, 0, -(1 + ev) * k, 0;
  } else {
    const double r = std::pow(1 - ev * ev, 1.5);
    S << 1, 0, -3 * pi * (1 - ev) / r, -3 * pi / r,        //
        0, 0, -(3 - ev) / (1 + ev), -2 / (1 + ev),         //
        0, 0, 4 / (1 + ev), (3 + ev) / (1 + ev),           //
        0, 1, 3 * pi / std::sqrt(1 - ev * ev), 3 * pi * (1 + ev) / r;
  }
  return S;
}

inline BoundaryData boundary_data(Eccentricity e, Half h) {
  const Mat4 I = Mat4::Identity();
  BoundaryData b;
  b.half = h;
  if (h == Half::Plus) {
    b.Z0 << I.col(1), I.col(2);
    b.Z1 << I.col(0), I.col(3);
  } else {
    b.Z0 << I.col(0), I.col(3);
    b.Z1 << I.col(1), I.col(2);
  }
  const Mat4 g = gamma_kep(e, std::numbers::pi).matrix;
  b.P << b.Z0, g.partialPivLu().solve(Eigen::Matrix<double, 4, 2>(b.Z1));
  b.Q_d << b.Z0, Eigen::Matrix<double, 4, 2>::Zero();
  b.script_P = script_P(e, h);
  const Eigen::FullPivLU<Mat4> lu(b.P);
  if (!lu.isInvertible()) throw InvalidState("boundary matrix P is singular");
  b.Gamma = b.script_P.fullPivLu().solve(b.Q_d * lu.inverse() * b.script_P);
  return b;
}

/// (Tr F, Tr F^2) on [0, pi] from the first two iterated integrals.
inline std::pair<double, double> trace_F_and_F2(const PerturbationD& D, Eccentricity e, const BoundaryData& b) {
  const Eigen::PartialPivLU<Mat4> lu(b.P);
  const Mat4 G1 = lu.solve(m_iterated(D, e, 1, std::numbers::pi) * b.Q_d);
  const Mat4 G2 = lu.solve(m_iterated(D, e, 2, std::numbers::pi) * b.Q_d);
  return {-G1.trace(), (G1 * G1).trace() - 2 * G2.trace()};
}

/// Index pairs used in the half-trace sum for the minus half.
enum class MinusIndexSet {
  Derived,   ///< rows {1,2}, columns {3,4}: consistent with the projector P_-^{-1} Q_d P^{-1} P_-
  Verbatim,  ///< rows {3,4}, columns {2,3}: the printed range, kept for comparison only
};

/// K(a, j) = int_{0 <= s <= theta <= pi} Dt_{aj}(theta) Dt_{ja}(s), Dt = P^{-1} J D-hat P.
inline Mat4 half_trace_kernel(const PerturbationD& D, Eccentricity e, Half h) {
  const Mat4 S = script_P(e, h);
  const Mat4 Sinv = S.inverse();
  const Mat4 J = J4();
  std::function<Mat4(double)> dt = [&](double t) -> Mat4 { return Sinv * J * d_hat(D, e, t) * S; };
  return detail::integrate_matrix(
             [&](double t) -> Eigen::MatrixXd {
               const Mat4 C = detail::cumulative(dt, t);
               return dt(t).cwiseProduct(C.transpose());
             },
             0.0, std::numbers::pi, detail::kTraceAbsTol, detail::kTraceRelTol)
      .value;
}

inline double f_half(const PerturbationD& D, Eccentricity e, Half h,
                     MinusIndexSet minus_set = MinusIndexSet::Derived) {
  const Mat4 K = half_trace_kernel(D, e, h);
  std::array<int, 2> rows{0, 3}, cols{1, 2};
  if (h == Half::Minus) {
    if (minus_set == MinusIndexSet::Derived) {
      rows = {0, 1};
      cols = {2, 3};
    } else {
      rows = {2, 3};
      cols = {1, 2};
    }
  }
  double s = 0;
  for (int a : rows)
    for (int j : cols) s += K(a, j);
  return -2 * s;
}

// ------------------------------------------------------------------ closed-form bounds

enum class BoundKind { fL_plus, fL_minus, fL_max, gL_plus, gL_minus, f_tilde, g_tilde };
enum class BoundMethod { closed_form, half_trace_quadrature, direct_G };

inline std::string to_string(BoundKind k) {
  switch (k) {
    case BoundKind::fL_plus: return "fL_plus";
    case BoundKind::fL_minus: return "fL_minus";
    case BoundKind::fL_max: return "fL_max";
    case BoundKind::gL_plus: return "gL_plus";
    case BoundKind::gL_minus: return "gL_minus";
    case BoundKind::f_tilde: return "f_tilde";
    case BoundKind::g_tilde: return "g_tilde";
  }
  return "?";
}

inline std::string to_string(BoundMethod m) {
  switch (m) {
    case BoundMethod::closed_form: return "closed_form";
    case BoundMethod::half_trace_quadrature: return "half_trace_quadrature";
    case BoundMethod::direct_G: return "direct_G";
  }
  return "?";
}

struct TraceBound {
  double e;
  double value;
  BoundMethod method;
  BoundKind kind;
};

/// Largest admissible switch point for the piecewise g-bounds.
inline double e0_max() { return 224.0 / (27.0 * std::numbers::pi * std::numbers::pi); }

inline void validate_e0(double e0) {
  if (!(e0 > 0 && e0 <= e0_max())) throw ValidationError("e0 must lie in (0, 224/(27 pi^2)]");
}

namespace detail {
using closed::hp;
using closed::regularised;
using closed::Rho2Variant;

inline Rho2Variant variant_for(double e, double e0) { return e < e0 ? Rho2Variant::Check : Rho2Variant::Hat; }
}  // namespace detail

inline double fL_plus(Eccentricity e) {
  return detail::regularised(e, [](const detail::hp& x) { return closed::fLp_coefficient_part(x); }) +
         closed::fLp_kernel(e);
}
inline double fL_minus(Eccentricity e) {
  return detail::regularised(e, [](const detail::hp& x) { return closed::fLm_coefficient_part(x); }) +
         closed::fLm_kernel(e);
}
inline double f_tilde(Eccentricity e) {
  return detail::regularised(e, [](const detail::hp& x) { return closed::ft_coefficient_part(x); }) +
         closed::ft_kernel(e);
}
inline double gL_plus(Eccentricity e, double e0 = 0.1) {
  validate_e0(e0);
  const auto v = detail::variant_for(e, e0);
  return detail::regularised(e, [v](const detail::hp& x) { return closed::gLp_coefficient_part(x, v); }) +
         closed::gLp_kernel(e);
}
/// g_{L,-} with an explicit choice of rho_2 upper bound (check below e0, hat from e0 on).
inline double gL_minus_variant(Eccentricity e, closed::Rho2Variant v) {
  return detail::regularised(e, [v](const detail::hp& x) { return closed::gLm_coefficient_part(x, v); }) +
         closed::gLm_kernel(e);
}
inline double gL_minus(Eccentricity e, double e0 = 0.1) {
  validate_e0(e0);
  return gL_minus_variant(e, detail::variant_for(e, e0));
}
inline double g_tilde(Eccentricity e, double e0 = 0.1) {
  validate_e0(e0);
  if (e < e0) return detail::regularised(e, [](const detail::hp& x) { return closed::gt_check_printed(x); });
  return detail::regularised(e, [](const detail::hp& x) { return closed::gt_hat_printed(x); });
}

/// The printed g_{L,+} and the two printed pieces of g_{L,-}, for comparison with the reconstructed bounds.
inline double gL_plus_printed(Eccentricity e) {
  return detail::regularised(e, [](const detail::hp& x) { return closed::gLp_printed(x); });
}
inline double gL_minus_printed_check(Eccentricity e) {
  return detail::regularised(e, [](const detail::hp& x) { return closed::gLm_check_printed(x); });
}
inline double gL_minus_printed_hat(Eccentricity e) {
  return detail::regularised(e, [](const detail::hp& x) { return closed::gLm_hat_printed(x); });
}
inline double g_tilde_check(Eccentricity e) {
  return detail::regularised(e, [](const detail::hp& x) { return closed::gt_check_printed(x); });
}
inline double g_tilde_hat(Eccentricity e) {
  return detail::regularised(e, [](const detail::hp& x) { return closed::gt_hat_printed(x); });
}

inline TraceBound closed_form_bound(BoundKind kind, Eccentricity e, double e0 = 0.1) {
  double v = 0;
  switch (kind) {
    case BoundKind::fL_plus: v = fL_plus(e); break;
    case BoundKind::fL_minus: v = fL_minus(e); break;
    case BoundKind::fL_max: v = std::max(fL_plus(e), fL_minus(e)); break;
    case BoundKind::gL_plus: v = gL_plus(e, e0); break;
    case BoundKind::gL_minus: v = gL_minus(e, e0); break;
    case BoundKind::f_tilde: v = f_tilde(e); break;
    case BoundKind::g_tilde: v = g_tilde(e, e0); break;
  }
  if (!std::isfinite(v)) throw NumericFailure("closed-form bound is not finite", e, v);
  return {e, v, BoundMethod::closed_form, kind};
}

/// est1-est3 brackets for the three rho integrals.
struct RhoBracket {
  double rho1_lo, rho1_hi, rho2_lo, rho2_hi, rho3_hi;
};

inline RhoBracket rho_bracket(Eccentricity e, double e0 = 0.1) {
  if (e == 0.0) {
    const double h = std::numbers::pi * std::numbers::pi / 2;
    return {h, h, h, h, std::numbers::pi * std::numbers::pi * std::numbers::pi / 6};
  }
  const auto b = closed::rho_bounds<detail::hp>(detail::hp(e.value()));
  return {static_cast<double>(b.rho1_lo), static_cast<double>(b.rho1_hi), static_cast<double>(b.rho2_lo),
          static_cast<double>(e < e0 ? b.rho2_hi_check : b.rho2_hi_hat), static_cast<double>(b.rho3_hi)};
}

// ------------------------------------------------------------------ bound curves

enum class BoundFamily { Lagrange, Euler, AlphaEta };

/// The stability boundary of Theorems for the Lagrange, Euler and (alpha, eta) families at eccentricity e.
inline double bound_curve(BoundFamily fam, Eccentricity e, bool use_g, double e0 = 0.1) {
  if (fam == BoundFamily::AlphaEta) {
    const double f = use_g ? g_tilde(e, e0) : f_tilde(e);
    return 1 / std::sqrt(f);
  }
  const double f = use_g ? gL_minus(e, e0) : std::max(fL_plus(e), fL_minus(e));
  if (fam == BoundFamily::Euler) return 1 / (2 * std::sqrt(f));
  const double r = 3 - 1 / std::sqrt(f);
  return 9 - r * r;
}

/// Membership in the guaranteed EE region of the (1+n)-gon.
inline bool gon_region_member(int n, double m, Eccentricity e, double e0 = 0.1) {
  if (n < 9) throw ValidationError("unsupported regime: the gon region is only established for n >= 9");
  if (!(m > 0)) throw ValidationError("m must be positive");
  if (m <= 2 * q_max(n)) return false;
  return xi_gon(n, m) < 1 / std::sqrt(g_tilde(e, e0));
}

}  // namespace erestab
