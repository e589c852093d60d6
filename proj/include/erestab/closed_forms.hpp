#pragma once

// Appendix closed forms for the Lagrange and (alpha, eta) trace bounds.
//
// Every bound splits into a "coefficient part" a0 + a1 rho1 + a2 rho2 (+ a3 rho3), whose
// coefficients carry removable 1/e^2 and 1/e^4 singularities, and a "kernel part"
// (an integral of a bounded kernel against rho_0^2) that is regular at e = 0.  The first is
// evaluated in 50-digit arithmetic, the second in double precision.

#include <array>
#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <functional>

#include "kepler.hpp"

namespace erestab::closed {

using hp = boost::multiprecision::cpp_bin_float_50;

/// Below this eccentricity the coefficient parts are extrapolated from nodes in [kSwitch, 4 kSwitch].
inline constexpr double kSwitch = 1e-3;

template <class T>
T pi_v() {
  return boost::math::constants::pi<T>();
}

template <class T>
std::array<T, 3> rho_hp(const T& e) {
  return rho_integrals_t<T>(e, T(1e-32));
}

// ---------------------------------------------------------------- f_{L,+}
template <class T>
std::array<T, 3> fLp_coeffs(const T& e) {
  using std::log, std::sqrt;
  const T pi = pi_v<T>(), pi2 = pi * pi;
  const T e2 = e * e, e4 = e2 * e2;
  const T s1 = sqrt((1 + e) / (1 - e)), L = log((1 + e) / (1 - e));
  const T a0 = (-382 * pow(e, 7) - 54 * pi2 * pow(e, 6) + 532 * pow(e, 5) + 90 * pi2 * e4 + 120 * pow(e, 3) -
                54 * pi2 * e2 + 18 * pi2 + 18 * pi2 * pow(e - 1, 3) * pow(e + 1, 2) * (e2 + 1) * s1 -
                (45 * pow(e, 8) + 249 * pow(e, 6) - 300 * e4 + 6 * e2) * L) /
               (36 * e4 * pow(e2 - 1, 3));
  const T a1 = (16 - e4) / (4 * pow(1 - e2, 2));
  const T a2 = (7 * e4 + 12 * e2 - 3) / (2 * e2 * pow(1 - e2, 2));
  return {a0, a1, a2};
}

// ---------------------------------------------------------------- f_{L,-}
template <class T>
std::array<T, 4> fLm_coeffs(const T& e) {
  using std::log, std::sqrt;
  const T pi = pi_v<T>(), pi2 = pi * pi, pi4 = pi2 * pi2;
  const T e2 = e * e, e4 = e2 * e2;
  const T r = sqrt(1 - e2), L = log((1 + e) / (1 - e));
  const T a0 =
      (-382 * pow(e, 11) + 72 * pi2 * pow(e, 10) + 1296 * pow(e, 9) + 81 * pi4 * pow(e, 8) - 36 * pi2 * pow(e, 8) -
       1326 * pow(e, 7) + 162 * pi4 * pow(e, 6) + 558 * pi2 * pow(e, 6) + 292 * pow(e, 5) + 81 * pi4 * e4 -
       666 * pi2 * e4 + 120 * pow(e, 3) + 90 * pi2 * e2 + 216 * pi2 * (e4 - 1) * r * e4 * log(e + 1) +
       pi2 * (216 * e4 - 216 * pow(e, 8)) * r * log(r / 2 + T(1) / 2) -
       3 * (e2 - 1) *
           (15 * pow(e, 8) + 68 * pow(e, 6) + 6 * (12 * pi2 * r + 17) * e2 + 3 * (24 * pi2 * r - 61) * e4 - 2) * e2 *
           L +
       pi2 *
           (126 * pow(e, 10) - 108 * pow(e, 9) - 180 * pow(e, 8) + 648 * pow(e, 7) + 486 * pow(e, 6) +
            756 * pow(e, 5) + 954 * e4 - 108 * e2 + 18) *
           r -
       18 * pi2) /
      (36 * e4 * pow(1 - e2, 5));
  const T a1 = (pow(e, 8) - 2 * pow(e, 6) - 8 * (9 * pi2 * r - 4) * e2 - 4 * (9 * pi2 * r + 4) -
                3 * (12 * pi2 * r + 5) * e4) /
               (4 * pow(1 - e2, 4));
  const T a2 = (-7 * e4 - 12 * e2 + 3) / (2 * e2 * pow(1 - e2, 2));
  const T a3 = 9 * pi * pow(e2 + 1, 2) / (pow(1 - e2, 3) * sqrt(1 - e2));
  return {a0, a1, a2, a3};
}

// ---------------------------------------------------------------- f-tilde
template <class T>
std::array<T, 4> ft_coeffs(const T& e) {
  using std::log, std::sqrt;
  const T pi = pi_v<T>(), pi2 = pi * pi, pi4 = pi2 * pi2;
  const T e2 = e * e, e4 = e2 * e2;
  const T r = sqrt(1 - e2), L = log((1 + e) / (1 - e));
  const T a0 =
      (140 * pow(e, 11) + 29 * pi2 * pow(e, 10) + 6 * pow(e, 9) + 36 * pi4 * pow(e, 8) + 17 * pi2 * pow(e, 8) -
       408 * pow(e, 7) + 36 * pi4 * pow(e, 6) + 47 * pi2 * pow(e, 6) + 238 * pow(e, 5) + 9 * pi4 * e4 -
       101 * pi2 * e4 + 24 * pow(e, 3) + 10 * pi2 * e2 - 2 * pi2 -
       36 * pi2 * r * (-2 * e4 + e2 + 1) * e4 * log(e + 1) +
       pi2 * (-72 * pow(e, 8) + 36 * pow(e, 6) + 36 * e4) * r * log(r / 2 + T(1) / 2) +
       (e2 - 1) * (6 * pow(e, 8) - 47 * pow(e, 6) - 3 * (12 * pi2 * r + 13) * e2 + (78 - 72 * pi2 * r) * e4 + 2) * e2 *
           L +
       pi2 *
           (-26 * pow(e, 10) + 72 * pow(e, 9) + 20 * pow(e, 8) + 180 * pow(e, 7) + 172 * pow(e, 6) +
            72 * pow(e, 5) + 170 * e4 - 14 * e2 + 2) *
           r) /
      (e4 * pow(1 - e2, 5));
  const T s72 = pow(1 - e2, 3) * sqrt(1 - e2);
  const T a1 = -3 * (4 * e4 + 43 * e2 + 28) / pow(1 - e2, 2) - 36 * pow(2 * pi * e2 + pi, 2) / s72;
  const T a2 = 2 * (18 * e4 + e2 + 5) / (e2 * pow(1 - e2, 2));
  const T a3 = 36 * pi * pow(2 * e2 + 1, 2) / s72;
  return {a0, a1, a2, a3};
}

// ---------------------------------------------------------------- rho bounds
template <class T>
struct RhoBounds {
  T rho1_lo, rho1_hi, rho2_lo, rho2_hi_check, rho2_hi_hat, rho3_hi;
};

template <class T>
RhoBounds<T> rho_bounds(const T& e) {
  using std::log, std::sqrt;
  const T pi = pi_v<T>(), pi2 = pi * pi;
  const T e2 = e * e;
  RhoBounds<T> b;
  b.rho1_lo = pi2 / (2 * (1 - e) * (1 + e) * (1 + e)) - log((1 + e) / (1 - e)) / (1 - e2);
  b.rho1_hi = pi2 / (2 * (1 - e2) * sqrt(1 - e2));
  b.rho2_lo = pi2 / 2 - 2 * e;
  b.rho2_hi_check = pi2 / 2 - 2 * e + pi2 * e2 / 4;
  b.rho2_hi_hat = -pi2 * (e + log(1 - e)) / (e2 * (1 + e));
  b.rho3_hi = (pi * log(sqrt(1 - e2) / 2 + T(1) / 2) - log(e + 1)) / (1 - e2) +
              pi2 * pi * sqrt((1 - e) / (1 + e)) * ((2 - e) * e + 2 * (1 - e) * log(1 - e)) /
                  (2 * e2 * e * (1 - e2) * sqrt(1 - e2));
  return b;
}

/// Outer bounds for rho_0 on [0, pi]: the convex chord above, the printed affine minorant (clamped at 0) below.
inline double rho0_upper(double e, double theta) { return theta / std::pow(1 - e * e, 1.5); }
inline double rho0_lower(double e, double theta) {
  const double v = theta / ((1 - e * e) * (1 + e)) - e / ((1 - e * e) * (1 - e));
  return std::max(0.0, v);
}
/// The middle upper bound as printed; kept only so the bracket check can report it.
inline double rho0_upper_printed_middle(double e, double theta) {
  const double pi = boost::math::constants::pi<double>();
  return pi * theta * std::sqrt((1 - e) / (1 + e)) / (pi - e * theta);
}

// ---------------------------------------------------------------- printed g closed forms
template <class T>
T gLp_printed(const T& e) {
  using std::log, std::sqrt;
  const T pi = pi_v<T>(), pi2 = pi * pi, pi4 = pi2 * pi2;
  const T e2 = e * e, e4 = e2 * e2;
  return (5 * e4 + 3) * (4 * e - pi2) / (4 * e2 * pow(e2 - 1, 2)) -
         6 * pi2 * (e2 + 1) * (e + log(1 - e)) / (pow(e - 1, 2) * e2 * pow(e + 1, 3)) -
         pi2 * (e4 - 16) / (8 * pow(1 - e2, 3) * sqrt(1 - e2)) -
         3 * (15 * pow(e, 6) + 83 * e4 - 100 * e2 + 2) * e2 * log((1 - e) / (1 + e)) / (36 * e4 * pow(e2 - 1, 3)) +
         (27 * (3 * pi2 - 16) * pow(e, 6) + (-112 + 441 * pi2 - 18 * pi4) * pow(e, 5) -
          27 * (48 + 3 * pi2 + 4 * pi4) * e4 + (7536 + 972 * pi2 - 9 * pi4) * pow(e, 3) - 90 * pi2 * (6 + pi2) * e2 +
          5184 * e - 18 * pi4) /
             (48 * pow(e2 - 1, 5)) +
         (-191 * pow(e, 7) - 27 * pi2 * pow(e, 6) + 266 * pow(e, 5) + 45 * pi2 * e4 + 60 * pow(e, 3) - 27 * pi2 * e2 +
          9 * pi2 * pow(e - 1, 3) * pow(e + 1, 2) * (e2 + 1) * sqrt((1 - e) / (1 + e)) + 9 * pi2) /
             (18 * e4 * pow(e2 - 1, 3));
}

template <class T>
T gLm_check_printed(const T& e) {
  using std::log, std::sqrt;
  const T pi = pi_v<T>(), pi2 = pi * pi, pi3 = pi2 * pi, pi4 = pi2 * pi2;
  const T e2 = e * e, e4 = e2 * e2;
  const T r = sqrt(1 - e2), L = log((1 + e) / (1 - e)), lh = log(r / 2 + T(1) / 2), sq = sqrt((1 + e) / (1 - e));
  const T P =
      -45 * pi2 * pow(e, 14) + 360 * pow(e, 13) + 45 * pi2 * pow(e, 12) + 225 * pi2 * pow(e, 11) -
      1844 * pow(e, 11) + 27 * pi2 * pow(e, 10) - 225 * pi2 * pow(e, 9) + 3888 * pow(e, 9) + 162 * pi4 * pow(e, 8) -
      324 * pi3 * pow(e, 8) - 45 * pi2 * pow(e, 8) - 162 * pi4 * pow(e, 7) - 648 * pi3 * pow(e, 7) -
      360 * pi2 * pow(e, 7) - 3660 * pow(e, 7) - 486 * pi4 * pow(e, 6) + 1647 * pi2 * pow(e, 6) -
      324 * pi4 * pow(e, 5) + 2592 * pi3 * pow(e, 5) + 360 * pi2 * pow(e, 5) + 1232 * pow(e, 5) + 810 * pi4 * e4 +
      4212 * pi3 * e4 - 1827 * pi2 * e4 + 810 * pi4 * pow(e, 3) + 1944 * pi3 * pow(e, 3) + 24 * pow(e, 3) +
      1458 * pi4 * e2 + 234 * pi2 * e2 + 972 * pi4 * e - 36 * pi2 +
      216 * pi * (e2 + 1) * ((2 * pi - 3) * e2 - 2 * pi - 3) * r * e4 * log(e + 1) +
      (216 * pow(e, 8) + 1296 * pow(e, 6) + 1080 * e4) * (pi2 * r * L + pi2 * r * lh) -
      324 * pi3 * (e - 1) *
          (2 * pow(e, 6) + 8 * pow(e, 5) + 3 * pi * e4 + 16 * e4 + 6 * pi * pow(e, 3) + 16 * pow(e, 3) +
           6 * pi * e2 + 6 * e2 + 6 * pi * e + 3 * pi) *
          log(1 - e) -
      648 * pi3 * (e - 1) * pi * pow(e2 + 1, 2) * sq * e * log(1 - e) +
      (-108 * pow(e, 12) - 282 * pow(e, 10) + 1776 * pow(e, 8) - 2286 * pow(e, 6) + 912 * e4 - 12 * e2) * L +
      pi4 * (-324 * pow(e, 8) - 324 * pow(e, 7) - 648 * pow(e, 5) + 972 * e4 - 324 * pow(e, 3) + 648 * e2) * sq +
      pi2 *
          (252 * pow(e, 10) - 216 * pow(e, 9) - 360 * pow(e, 8) + 1296 * pow(e, 7) + 972 * pow(e, 6) +
           1512 * pow(e, 5) + 1908 * e4 - 216 * e2 + 36) *
          r;
  return P / (72 * e4 * pow(1 - e2, 5));
}

template <class T>
T gLm_hat_printed(const T& e) {
  using std::log, std::sqrt;
  const T pi = pi_v<T>(), pi2 = pi * pi, pi3 = pi2 * pi, pi4 = pi2 * pi2;
  const T e2 = e * e, e4 = e2 * e2;
  const T r = sqrt(1 - e2), L = log((1 + e) / (1 - e)), lh = log(r / 2 + T(1) / 2), sq = sqrt((1 + e) / (1 - e));
  const T P =
      225 * pi2 * pow(e, 11) - 764 * pow(e, 11) + 99 * pi2 * pow(e, 10) - 405 * pi2 * pow(e, 9) + 2592 * pow(e, 9) +
      162 * pi4 * pow(e, 8) - 324 * pi3 * pow(e, 8) - 207 * pi2 * pow(e, 8) - 162 * pi4 * pow(e, 7) -
      648 * pi3 * pow(e, 7) - 2652 * pow(e, 7) - 486 * pi4 * pow(e, 6) + 1764 * pi2 * pow(e, 6) -
      324 * pi4 * pow(e, 5) + 2592 * pi3 * pow(e, 5) + 72 * pi2 * pow(e, 5) + 584 * pow(e, 5) + 810 * pi4 * e4 +
      4212 * pi3 * e4 - 1908 * pi2 * e4 + 810 * pi4 * pow(e, 3) + 1944 * pi3 * pow(e, 3) + 216 * pi2 * pow(e, 3) +
      240 * pow(e, 3) + 1458 * pi4 * e2 + 288 * pi2 * e2 + 972 * pi4 * e - 108 * pi2 * e - 36 * pi2 -
      648 * pi4 * (e - 1) * sqrt((1 - e) / (e + 1)) * pow(e2 + 1, 2) * e * log(1 - e) -
      36 * pi2 * (e - 1) *
          (-5 * pow(e, 8) + 18 * pi * pow(e, 6) + 10 * pow(e, 6) + 72 * pi * pow(e, 5) + 27 * pi2 * e4 +
           144 * pi * e4 - 8 * e4 + 54 * pi2 * pow(e, 3) + 144 * pi * pow(e, 3) + 54 * pi2 * e2 + 54 * pi * e2 +
           6 * e2 + 54 * pi2 * e + 27 * pi2 - 3) *
          log(1 - e) +
      216 * pi * ((2 * pi - 3) * e2 - 2 * pi - 3) * (e2 + 1) * r * e4 * log(e + 1) +
      (216 * pow(e, 8) + 1296 * pow(e, 6) + 1080 * e4) * pi2 * r * (L + lh) +
      (-108 * pow(e, 12) - 282 * pow(e, 10) + 1776 * pow(e, 8) - 2286 * pow(e, 6) + 912 * e4 - 12 * e2) * L +
      pi4 * (-324 * pow(e, 8) - 324 * pow(e, 7) - 648 * pow(e, 5) + 972 * e4 - 324 * pow(e, 3) + 648 * e2) * sq +
      pi2 *
          (252 * pow(e, 10) - 216 * pow(e, 9) - 360 * pow(e, 8) + 1296 * pow(e, 7) + 972 * pow(e, 6) +
           1512 * pow(e, 5) + 1908 * e4 - 216 * e2 + 36) *
          r;
  return P / (72 * e4 * pow(1 - e2, 5));
}

template <class T>
T gt_check_printed(const T& e) {
  using std::log, std::sqrt;
  const T pi = pi_v<T>(), pi2 = pi * pi, pi4 = pi2 * pi2;
  const T e2 = e * e, e4 = e2 * e2;
  const T r = sqrt(1 - e2), lh = log(r / 2 + T(1) / 2), sq = sqrt((1 - e) / (e + 1));
  const T P =
      r * (-pi2 * (-72 * pow(e, 8) + 36 * pow(e, 6) + 36 * e4) * log(1 - e) -
           pi * (144 * pow(e, 8) + 144 * pow(e, 6) + 36 * e4) * log(e + 1) +
           pi2 * (72 * pow(e, 8) + 180 * pow(e, 6) + 72 * e4) * lh +
           pi2 * (-26 * pow(e, 10) + 72 * pow(e, 9) + 20 * pow(e, 8) + 180 * pow(e, 7) + 172 * pow(e, 6) +
                  72 * pow(e, 5) + 170 * e4 - 14 * e2 + 2)) -
      9 * pi2 * pow(e, 14) + 72 * pow(e, 13) + 17 * pi2 * pow(e, 12) / 2 - 72 * pow(e, 11) +
      99 * pi2 * pow(e, 10) / 2 - 72 * pi2 * pow(e, 9) + 534 * pow(e, 9) + 54 * pi4 * pow(e, 8) -
      273 * pi2 * pow(e, 8) / 8 - 252 * pi2 * pow(e, 7) + 528 * pow(e, 7) + 54 * pi4 * pow(e, 6) +
      77 * pi2 * pow(e, 6) / 2 - 108 * pi2 * pow(e, 5) + 726 * pow(e, 5) + 27 * pi4 * e4 / 2 - 225 * pi2 * e4 / 2 +
      4 * pow(e, 3) + 15 * pi2 * e2 + pow(e2 - 1, 3) * (6 * e4 - 35 * e2 + 2) * e2 * log(e + 1) +
      pi4 * (-72 * pow(e, 7) + 144 * pow(e, 6) - 72 * pow(e, 5) + 144 * e4 - 18 * pow(e, 3) + 36 * e2) * sq -
      (e - 1) *
          (6 * pow(e, 10) + 6 * pow(e, 9) - 47 * pow(e, 8) - 47 * pow(e, 7) + 78 * pow(e, 6) + 78 * pow(e, 5) +
           3 * (48 * pi4 * sq - 13) * e4 - 39 * pow(e, 3) + 2 * (72 * pi4 * sq + 1) * e2 + 2 * e + 36 * pi4 * sq) *
          e * log(1 - e) -
      2 * pi2;
  return P / (e4 * pow(1 - e2, 5));
}

template <class T>
T gt_hat_printed(const T& e) {
  using std::log, std::sqrt;
  const T pi = pi_v<T>(), pi2 = pi * pi, pi4 = pi2 * pi2;
  const T e2 = e * e, e4 = e2 * e2;
  const T r = sqrt(1 - e2), lh = log(r / 2 + T(1) / 2);
  const T inner =
      140 * pow(e, 11) + 121 * pi2 * pow(e, 10) / 2 - 108 * pi2 * pow(e, 9) + 310 * pow(e, 9) +
      54 * pi4 * pow(e, 8) - 505 * pi2 * pow(e, 8) / 8 - 182 * pi2 * pow(e, 7) + 648 * pow(e, 7) +
      54 * pi4 * pow(e, 6) + 115 * pi2 * pow(e, 6) / 2 - 150 * pi2 * pow(e, 5) + 670 * pow(e, 5) +
      27 * pi4 * e4 / 2 - 119 * pi2 * e4 - 10 * pi2 * e - 2 * pi2 + 18 * pi2 * pow(e, 3) + 24 * pow(e, 3) +
      20 * pi2 * e2 + pow(e2 - 1, 3) * (6 * e4 - 35 * e2 + 2) * e2 * log(e + 1) -
      pow(e - 1, 3) * pow(e + 1, 2) *
          (6 * pow(e, 7) + 6 * pow(e, 6) - 35 * pow(e, 5) - (35 + 36 * pi2) * e4 + 2 * pow(e, 3) -
           2 * (pi2 - 1) * e2 - 10 * pi2) *
          log(1 - e);
  const T P = r * inner +
              2 * pi *
                  (18 * (4 * pow(e, 6) - 3 * e2 - 1) * e4 * log(e + 1) -
                   18 * pi * pow(e - 1, 2) * (2 * e2 + 1) * (pow(e, 5) + 2 * e4 + pow(e, 3) - 2 * pi2 * e2 - pi2) * e *
                       log(1 - e) +
                   pi * (13 * pow(e, 12) - 36 * pow(e, 11) - 23 * pow(e, 10) - 54 * pow(e, 9) +
                         4 * (9 * pi2 - 19) * pow(e, 8) - 54 * (2 * pi2 - 1) * pow(e, 7) + (1 + 108 * pi2) * pow(e, 6) -
                         36 * (3 * pi2 - 1) * pow(e, 5) + (92 + 81 * pi2) * e4 - 27 * pi2 * pow(e, 3) +
                         2 * (9 * pi2 - 4) * e2 - 18 * (2 * pow(e, 6) + 3 * e4 - 3 * e2 - 2) * e4 * lh + 1));
  return P / (e4 * pow(1 - e2, 5) * r);
}

// ---------------------------------------------------------------- kernels (double precision)

/// A(s): the common trigonometric factor of h_{L,+} and h_{L,-}.
inline double kernel_A(double e, double s) {
  return e * e * e * std::cos(3 * s) + 4 * e * e * std::cos(2 * s) + (e * e + 6) * e * std::cos(s) + 2 * e * e + 2;
}
/// The theta-factor of h_{L,+}: (1 + e cos t)(1 + 2 e cos t + e^2 cos 2t).
inline double kernel_Cplus(double e, double t) {
  return (e * std::cos(t) + 1) * (e * e * std::cos(2 * t) + 2 * e * std::cos(t) + 1);
}
/// Antiderivative of kernel_Cplus.
inline double kernel_Cplus_primitive(double e, double t) {
  return (1 + e * e) * t + e * (3 + e * e / 2) * std::sin(t) + e * e * std::sin(2 * t) + e * e * e / 6 * std::sin(3 * t);
}
inline double h_Lminus(double e, double t) {
  const double B = 3 * (e * e + 1) * t + e * std::sin(t) * (e * e * std::cos(2 * t) + 2 * e * e + 6 * e * std::cos(t) + 9);
  return 3 * kernel_A(e, t) * B / (4 * std::pow(e * e - 1, 2));
}
inline double h_tilde(double e, double t) {
  const double c = std::cos(t);
  return 18 * (e * c + 1) * (e * e + 2 * e * c + 1) * (2 * e * e * t + e * std::sin(t) * (e * e + e * c + 3) + t) /
         std::pow(1 - e * e, 2);
}

inline double integrate_0_pi(const std::function<double(double)>& f) {
  double err = 0, l1 = 0;
  const double pi = boost::math::constants::pi<double>();
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, pi, 25, 1e-12, &err, &l1);
  if (!(err <= 1e-9 * (1 + l1))) throw NumericFailure("kernel quadrature did not converge", 0.0, err);
  return v;
}

/// Signed measure of {t in [s, pi] : C(t) > 0} and of {C(t) < 0}, weighted by C.
inline std::pair<double, double> cplus_split(double e, double s) {
  const double pi = boost::math::constants::pi<double>();
  // second factor vanishes where 2 e^2 c^2 + 2 e c + 1 - e^2 = 0
  std::vector<double> cuts{s, pi};
  if (e > 0) {
    const double disc = 2 * e * e - 1;
    if (disc > 0) {
      for (double sign : {-1.0, 1.0}) {
        const double c = (-1 + sign * std::sqrt(disc)) / (2 * e);
        if (c > -1 && c < 1) {
          const double t = std::acos(c);
          if (t > s && t < pi) cuts.push_back(t);
        }
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  double pos = 0, neg = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double piece = kernel_Cplus_primitive(e, cuts[i + 1]) - kernel_Cplus_primitive(e, cuts[i]);
    (kernel_Cplus(e, 0.5 * (cuts[i] + cuts[i + 1])) >= 0 ? pos : neg) += piece;
  }
  return {pos, neg};
}

inline double fLp_kernel(double e) {
  const double pi = boost::math::constants::pi<double>();
  const double k = 9 / (4 * std::pow(e * e - 1, 2));
  return k * integrate_0_pi([&](double s) {
    const double r = rho0(e, s);
    return kernel_A(e, s) * r * r * (kernel_Cplus_primitive(e, pi) - kernel_Cplus_primitive(e, s));
  });
}

inline double fLm_kernel(double e) {
  return integrate_0_pi([&](double t) {
    const double r = rho0(e, t);
    return h_Lminus(e, t) * r * r;
  });
}

inline double ft_kernel(double e) {
  return integrate_0_pi([&](double t) {
    const double r = rho0(e, t);
    return h_tilde(e, t) * r * r;
  });
}

/// Kernel term with rho_0^2 replaced by its upper bound where the kernel is positive and its lower bound elsewhere.
inline double gLp_kernel(double e) {
  const double k = 9 / (4 * std::pow(e * e - 1, 2));
  return k * integrate_0_pi([&](double s) {
    const double A = kernel_A(e, s);
    const double hi = std::pow(rho0_upper(e, s), 2), lo = std::pow(rho0_lower(e, s), 2);
    const auto [pos, neg] = cplus_split(e, s);
    return A >= 0 ? A * (hi * pos + lo * neg) : A * (lo * pos + hi * neg);
  });
}

inline double gLm_kernel(double e) {
  return integrate_0_pi([&](double t) {
    const double h = h_Lminus(e, t);
    return h * std::pow(h >= 0 ? rho0_upper(e, t) : rho0_lower(e, t), 2);
  });
}

// ---------------------------------------------------------------- coefficient parts

enum class Rho2Variant { Check, Hat };

template <class T>
T fLp_coefficient_part(const T& e) {
  const auto a = fLp_coeffs(e);
  const auto r = rho_hp(e);
  return a[0] + a[1] * r[0] + a[2] * r[1];
}

template <class T>
T fLm_coefficient_part(const T& e) {
  const auto a = fLm_coeffs(e);
  const auto r = rho_hp(e);
  return a[0] + a[1] * r[0] + a[2] * r[1] + a[3] * r[2];
}

template <class T>
T ft_coefficient_part(const T& e) {
  const auto a = ft_coeffs(e);
  const auto r = rho_hp(e);
  return a[0] + a[1] * r[0] + a[2] * r[1] + a[3] * r[2];
}

template <class T>
T pick_rho2(const T& coeff, const RhoBounds<T>& b, Rho2Variant v) {
  if (coeff < 0) return b.rho2_lo;
  return v == Rho2Variant::Check ? b.rho2_hi_check : b.rho2_hi_hat;
}

template <class T>
T gLp_coefficient_part(const T& e, Rho2Variant v) {
  const auto a = fLp_coeffs(e);
  const auto b = rho_bounds(e);
  return a[0] + a[1] * (a[1] >= 0 ? b.rho1_hi : b.rho1_lo) + a[2] * pick_rho2(a[2], b, v);
}

template <class T>
T gLm_coefficient_part(const T& e, Rho2Variant v) {
  const auto a = fLm_coeffs(e);
  const auto b = rho_bounds(e);
  if (a[3] < 0) throw InvalidState("negative rho3 coefficient has no printed lower bound");
  return a[0] + a[1] * (a[1] >= 0 ? b.rho1_hi : b.rho1_lo) + a[2] * pick_rho2(a[2], b, v) + a[3] * b.rho3_hi;
}

/// Evaluates a coefficient part in 50-digit arithmetic; below kSwitch the value is the
/// degree-6 interpolant through seven nodes in [kSwitch, 4 kSwitch], evaluated at e.
inline double regularised(double e, const std::function<hp(const hp&)>& part) {
  if (e >= kSwitch) return static_cast<double>(part(hp(e)));
  constexpr int n = 7;
  std::array<hp, n> x, y;
  for (int i = 0; i < n; ++i) {
    x[i] = hp(kSwitch) * (1 + hp(i) / 2);
    y[i] = part(x[i]);
  }
  const hp at(e);
  hp sum = 0;
  for (int i = 0; i < n; ++i) {
    hp w = 1;
    for (int j = 0; j < n; ++j)
      if (j != i) w *= (at - x[j]) / (x[i] - x[j]);
    sum += w * y[i];
  }
  return static_cast<double>(sum);
}

}  // namespace erestab::closed
