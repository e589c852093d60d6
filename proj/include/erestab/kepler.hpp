#pragma once

#include <array>
#include <boost/math/constants/constants.hpp>
#include <boost/math/differentiation/autodiff.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "symplectic.hpp"

namespace erestab {

/// Orbital eccentricity, validated on construction.
class Eccentricity {
 public:
  Eccentricity(double e) : e_(e) {  // NOLINT: implicit by design
    if (!(e >= 0.0 && e < 1.0)) throw ValidationError("eccentricity must lie in [0, 1)");
  }
  operator double() const { return e_; }  // NOLINT
  double value() const { return e_; }

 private:
  double e_;
};

struct RhoIntegrals {
  double rho1, rho2, rho3;
};

struct KeplerFrame {
  double theta;
  Mat4 matrix;
};

/// rho_0(e, theta) = int_0^theta (1 + e cos t)^{-2} dt, continued across every multiple of 2 pi.
template <class T>
T rho0(const T& e, const T& theta) {
  using std::atan2, std::cos, std::floor, std::sin, std::sqrt;
  const T two_pi = 2 * boost::math::constants::pi<T>();
  if (e == 0) return theta;
  const T s = 1 - e * e;
  const T s32 = s * sqrt(s);
  const T k = sqrt((1 - e) / (1 + e));
  const T wind = floor(theta / two_pi);
  const T phi = theta - wind * two_pi;
  T sh = sin(phi / 2);
  if (sh < 0) sh = 0;
  const T base = 2 / s32 * atan2(k * sh, cos(phi / 2)) - e * sin(phi) / (s * (1 + e * cos(phi)));
  return wind * (two_pi / s32) + base;
}

inline double rho0(double e, double theta) { return rho0<double>(e, theta); }

/// The three double integrals over 0 <= s <= theta <= pi.
template <class T>
std::array<T, 3> rho_integrals_t(const T& e, const T& tol) {
  using boost::math::quadrature::gauss_kronrod;
  const T pi = boost::math::constants::pi<T>();
  T err = 0;
  auto check = [&](const T& v, const char* which) {
    if (!(err <= 100 * tol * (1 + abs(v))))
      throw NumericFailure(std::string("quadrature for ") + which + " did not converge",
                           0.0, static_cast<double>(err));
    return v;
  };
  using std::abs, std::cos;
  const T r1 = check(gauss_kronrod<T, 31>::integrate([&](const T& t) { return rho0<T>(e, t); }, T(0), pi, 20, tol, &err), "rho1");
  const T r2 = check(gauss_kronrod<T, 31>::integrate([&](const T& s) { return (pi - s) / (1 + e * cos(s)); }, T(0), pi, 20, tol, &err), "rho2");
  const T r3 = check(gauss_kronrod<T, 31>::integrate([&](const T& s) { return (pi - s) * rho0<T>(e, s); }, T(0), pi, 20, tol, &err), "rho3");
  return {r1, r2, r3};
}

inline RhoIntegrals rho_integrals(Eccentricity e) {
  const auto r = rho_integrals_t<double>(e.value(), 1e-13);
  return {r[0], r[1], r[2]};
}

/// B(theta) for one block: [[I, -JJ], [JJ, I - R/(1 + e cos theta)]] with JJ = diag(J2, ..., J2).
inline Matrix b_block(double e, double theta, const Matrix& R) {
  const Eigen::Index k = R.rows();
  if (R.cols() != k || k % 2 != 0 || k == 0) throw ValidationError("block R must be square of even size");
  Matrix JJ = Matrix::Zero(k, k);
  for (Eigen::Index i = 0; i < k; i += 2) JJ.block(i, i, 2, 2) = J2();
  Matrix B(2 * k, 2 * k);
  B.topLeftCorner(k, k).setIdentity();
  B.topRightCorner(k, k) = -JJ;
  B.bottomLeftCorner(k, k) = JJ;
  B.bottomRightCorner(k, k) = Matrix::Identity(k, k) - R / (1.0 + e * std::cos(theta));
  return B;
}

inline Mat2 kepler_R() { return Eigen::Vector2d(3.0, 0.0).asDiagonal(); }

inline Mat4 b_kep(Eccentricity e, double theta) { return b_block(e, theta, kepler_R()); }

namespace detail {

// Entries (row-major) of gamma_Kep without the rho_0 term, and of the rho_0 coefficient.
template <class T>
std::array<T, 16> kepler_base(double e, const T& t) {
  using std::cos, std::sin;
  const T c = cos(t), s = sin(t), p = 1 + e * c;
  const T s2 = s * s, sh = sin(t / 2);
  const double up = 1 + e, um = 1 - e;
  return {(2 + e - c - e * s2) / up,
          (2 * (e * c - 1) * s - 3 * e * up * s / p) / um,
          -((1 - e * c + 3 * e / p) * s) / um,
          (1 - c - e * s2) / up,
          -(p * s) / up,
          -(up - 2 * c + 2 * e * s2) / um,
          -(1 - c + e * s2) / um,
          -(p * s) / up,
          (p * s) / up,
          -2 * (c - 1) * (up + e * c) / um,
          -(e * c * c + c - 2) / um,
          (p * s) / up,
          -2 * (2 + e + e * c) * sh * sh / up,
          2 * (2 + e * c) * s / um,
          (2 + e * c) * s / um,
          (e * c * c + 2 * c - 1) / up};
}

template <class T>
std::array<T, 16> kepler_correction(double e, const T& t) {
  using std::cos, std::sin;
  const T c = cos(t), s = sin(t), p = 1 + e * c;
  const T q = p + e * e * s * s;
  const double up = 1 + e, um = 1 - e;
  const T z = T(0) * t;
  return {z, 3 * up * q / um, 3 * q / um, z,
          z, 3 * e * up * p * s / um, 3 * e * p * s / um, z,
          z, -3 * e * up * p * s / um, -3 * e * p * s / um, z,
          z, -3 * up * p * p / um, -3 * p * p / um, z};
}

template <class T>
Eigen::Matrix<T, 4, 4> gamma_kep_t(double e, const T& theta) {
  const auto a = kepler_base<T>(e, theta);
  const auto c = kepler_correction<T>(e, theta);
  const T r = rho0<T>(T(e), theta);
  Eigen::Matrix<T, 4, 4> g;
  for (int i = 0; i < 16; ++i) g(i / 4, i % 4) = a[i] + r * c[i];
  return g;
}

}  // namespace detail

/// Closed-form fundamental solution of the linearised Kepler system in true anomaly.
inline KeplerFrame gamma_kep(Eccentricity e, double theta) {
  const auto a = detail::kepler_base<double>(e, theta);
  const auto c = detail::kepler_correction<double>(e, theta);
  const double r = rho0(e.value(), theta);
  Mat4 g;
  for (int i = 0; i < 16; ++i) g(i / 4, i % 4) = a[i] + r * c[i];
  return {theta, g};
}

/// d/dtheta of gamma_kep by forward-mode differentiation of the closed form.
inline Mat4 gamma_kep_derivative(Eccentricity e, double theta) {
  using boost::math::differentiation::make_fvar;
  const auto x = make_fvar<double, 1>(theta);
  const auto a = detail::kepler_base(e.value(), x);
  const auto c = detail::kepler_correction(e.value(), x);
  const double r = rho0(e.value(), theta);
  const double p = 1 + e * std::cos(theta);
  const double dr = 1.0 / (p * p);
  Mat4 d;
  for (int i = 0; i < 16; ++i) d(i / 4, i % 4) = a[i].derivative(1) + r * c[i].derivative(1) + dr * c[i].derivative(0);
  return d;
}

enum class DerivativeMethod { Analytic, CentralDifference };

/// max over an even theta-grid on [0, 2 pi] of |d gamma/d theta - J B gamma|_max.
inline double kepler_residual(Eccentricity e, int n_samples, DerivativeMethod method = DerivativeMethod::Analytic) {
  if (n_samples < 16) throw ValidationError("kepler_residual needs at least 16 samples");
  const double two_pi = 2 * boost::math::constants::pi<double>();
  double worst = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double th = two_pi * i / (n_samples - 1);
    Mat4 d;
    if (method == DerivativeMethod::Analytic) {
      d = gamma_kep_derivative(e, th);
    } else {
      // extended precision keeps the cancellation error of the quotient below the truncation error
      constexpr long double h = 1e-6L;
      const long double t = th;
      d = ((detail::gamma_kep_t<long double>(e, t + h) - detail::gamma_kep_t<long double>(e, t - h)) / (2 * h))
              .cast<double>();
    }
    const Mat4 res = d - J4() * b_kep(e, th) * gamma_kep(e, th).matrix;
    worst = std::max(worst, res.cwiseAbs().maxCoeff());
  }
  return worst;
}

/// The Hessian D^2 H_K along the Kepler orbit with C = lambda-hat = 1, in the original (p, q) coordinates.
inline Mat4 kepler_hessian(Eccentricity e, double theta) {
  const double p = 1 + e * std::cos(theta);
  const Mat2 R = rotation(theta);
  Mat4 H = Mat4::Zero();
  H.topLeftCorner<2, 2>().setIdentity();
  H.bottomRightCorner<2, 2>() = p * p * p * (Mat2::Identity() - R * kepler_R() * R.transpose());
  return H;
}

struct FirstIntegralSolutions {
  Eigen::Vector4d xi_H, xi_C, xi_A2, xi_h;
};

/// Gradients of the energy, angular momentum and Runge-Lenz component A_2 pushed through J,
/// plus the scaling solution xi_h (time t = rho_0 when C = 1).
inline FirstIntegralSolutions first_integral_solutions(Eccentricity e, double theta) {
  const double c = std::cos(theta), s = std::sin(theta), p = 1 + e * c;
  FirstIntegralSolutions out;
  out.xi_H << -c * p * p, -s * p * p, -s, e + c;
  out.xi_C << -e - c, -s, -s / p, c / p;
  out.xi_A2 << std::sin(2 * theta) + e * s * (1 + c * c), -std::cos(2 * theta) - e * c * c * c, (1 + e * c + s * s) / p,
      -s * c / p;
  out.xi_h << -s / 3, (e + c) / 3, -2 * c / (3 * p), -2 * s / (3 * p);
  out.xi_h += rho0(e.value(), theta) * out.xi_H;
  return out;
}

}  // namespace erestab
