#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "detail/dop853_tableau.hpp"
#include "errors.hpp"

namespace erestab {

struct OdeOptions {
  double rtol = 1e-12;
  double atol = 1e-12;
  long max_steps = 10'000'000;
  double max_step = std::numeric_limits<double>::infinity();
  bool dense = true;
};

struct IntegratorStats {
  long steps = 0;
  long rejected = 0;
  long rhs_evals = 0;
  double error_estimate = 0.0;  // sum of accepted local error estimates (absolute)
};

/// Piecewise 7th-order interpolant over the accepted steps.
class DenseOutput {
 public:
  struct Segment {
    double t_old, t_new;
    Eigen::VectorXd y_old;
    Eigen::Matrix<double, Eigen::Dynamic, 7> F;  // rows = state dim
  };

  void push(Segment s) { segments_.push_back(std::move(s)); }
  bool empty() const { return segments_.empty(); }
  double t_begin() const { return segments_.front().t_old; }
  double t_end() const { return segments_.back().t_new; }

  Eigen::VectorXd operator()(double t) const {
    if (segments_.empty()) throw InvalidState("dense output requested from an empty solution");
    const bool forward = t_end() >= t_begin();
    auto before = [&](double a, double b) { return forward ? a < b : a > b; };
    // segments are ordered along the integration direction
    auto it = std::lower_bound(segments_.begin(), segments_.end(), t,
                               [&](const Segment& s, double x) { return before(s.t_new, x); });
    if (it == segments_.end()) it = std::prev(segments_.end());
    const Segment& s = *it;
    const double h = s.t_new - s.t_old;
    const double x = (t - s.t_old) / h;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(s.y_old.size());
    for (int i = 0; i < 7; ++i) {
      y += s.F.col(6 - i);
      y *= (i % 2 == 0) ? x : (1.0 - x);
    }
    return y + s.y_old;
  }

 private:
  std::vector<Segment> segments_;
};

struct OdeSolution {
  double t_final = 0.0;
  Eigen::VectorXd y_final;
  IntegratorStats stats;
  DenseOutput dense;
};

/// Adaptive explicit RK 8(5,3) with dense output. `f(t, y, dydt)` fills dydt.
template <class Rhs>
OdeSolution integrate_dop853(Rhs&& f, double t0, const Eigen::VectorXd& y0, double t1,
                             const OdeOptions& opt = {}) {
  namespace tab = detail::dop853;
  using Eigen::VectorXd;
  const Eigen::Index n = y0.size();
  OdeSolution out;
  out.t_final = t0;
  out.y_final = y0;
  if (t1 == t0) return out;

  const double dir = t1 > t0 ? 1.0 : -1.0;
  constexpr double safety = 0.9, min_factor = 0.2, max_factor = 10.0;
  constexpr double err_exp = -1.0 / 8.0;

  Eigen::MatrixXd K(n, tab::kExtended);
  VectorXd y = y0, y_new(n), f0(n), f_new(n), tmp(n);
  double t = t0;
  f(t, y, f0);
  ++out.stats.rhs_evals;

  auto scale_of = [&](const VectorXd& a, const VectorXd& b) {
    return (opt.atol + a.cwiseAbs().cwiseMax(b.cwiseAbs()).array() * opt.rtol).matrix().eval();
  };

  // Initial step (Hairer-Norsett-Wanner heuristic).
  double h_abs;
  {
    const VectorXd sc = scale_of(y, y);
    const double d0 = (y.array() / sc.array()).matrix().norm() / std::sqrt(double(n));
    const double d1 = (f0.array() / sc.array()).matrix().norm() / std::sqrt(double(n));
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, std::abs(t1 - t0));
    tmp = y + dir * h0 * f0;
    VectorXd f1(n);
    f(t + dir * h0, tmp, f1);
    ++out.stats.rhs_evals;
    const double d2 = ((f1 - f0).array() / sc.array()).matrix().norm() / std::sqrt(double(n)) / h0;
    const double h1 = (d1 <= 1e-15 && d2 <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                                    : std::pow(0.01 / std::max(d1, d2), 1.0 / 8.0);
    h_abs = std::min({100 * h0, h1, opt.max_step});
  }

  while (dir * (t1 - t) > 0) {
    if (out.stats.steps >= opt.max_steps) throw NumericFailure("maximum step count exceeded", t);
    const double min_step = 10 * std::abs(std::nextafter(t, dir * INFINITY) - t);
    h_abs = std::clamp(h_abs, min_step, opt.max_step);
    bool rejected = false;
    double h = 0, err_norm = 0, t_new = t;
    for (;;) {
      if (h_abs < min_step) throw NumericFailure("step size underflow", t);
      h = h_abs * dir;
      t_new = t + h;
      if (dir * (t_new - t1) > 0) t_new = t1;
      h = t_new - t;
      h_abs = std::abs(h);

      K.col(0) = f0;
      for (int s = 1; s < tab::kStages; ++s) {
        tmp = y;
        for (int j = 0; j < s; ++j)
          if (tab::A[s][j] != 0.0) tmp.noalias() += (h * tab::A[s][j]) * K.col(j);
        VectorXd ks(n);
        f(t + tab::C[s] * h, tmp, ks);
        K.col(s) = ks;
      }
      y_new = y;
      for (int j = 0; j < tab::kStages; ++j)
        if (tab::A[tab::kStages][j] != 0.0) y_new.noalias() += (h * tab::A[tab::kStages][j]) * K.col(j);
      f(t_new, y_new, f_new);
      K.col(tab::kStages) = f_new;
      out.stats.rhs_evals += tab::kStages;

      const VectorXd sc = scale_of(y, y_new);
      VectorXd e5 = VectorXd::Zero(n), e3 = VectorXd::Zero(n);
      for (int j = 0; j <= tab::kStages; ++j) {
        if (tab::E5[j] != 0.0) e5.noalias() += tab::E5[j] * K.col(j);
        if (tab::E3[j] != 0.0) e3.noalias() += tab::E3[j] * K.col(j);
      }
      const double n5 = (e5.array() / sc.array()).matrix().squaredNorm();
      const double n3 = (e3.array() / sc.array()).matrix().squaredNorm();
      err_norm = (n5 == 0 && n3 == 0) ? 0.0 : h_abs * n5 / std::sqrt((n5 + 0.01 * n3) * double(n));

      if (err_norm < 1) {
        double factor = err_norm == 0 ? max_factor : std::min(max_factor, safety * std::pow(err_norm, err_exp));
        if (rejected) factor = std::min(1.0, factor);
        h_abs *= factor;
        out.stats.error_estimate += err_norm * sc.maxCoeff();
        break;
      }
      h_abs *= std::max(min_factor, safety * std::pow(err_norm, err_exp));
      rejected = true;
      ++out.stats.rejected;
    }

    if (opt.dense) {
      for (int s = tab::kStages + 1; s < tab::kExtended; ++s) {
        tmp = y;
        for (int j = 0; j < s; ++j)
          if (tab::A[s][j] != 0.0) tmp.noalias() += (h * tab::A[s][j]) * K.col(j);
        VectorXd ks(n);
        f(t + tab::C[s] * h, tmp, ks);
        K.col(s) = ks;
      }
      out.stats.rhs_evals += tab::kExtended - tab::kStages - 1;
      DenseOutput::Segment seg{t, t_new, y, Eigen::Matrix<double, Eigen::Dynamic, 7>(n, 7)};
      const VectorXd dy = y_new - y;
      seg.F.col(0) = dy;
      seg.F.col(1) = h * f0 - dy;
      seg.F.col(2) = 2 * dy - h * (f_new + f0);
      for (int r = 0; r < 4; ++r) {
        VectorXd acc = VectorXd::Zero(n);
        for (int j = 0; j < tab::kExtended; ++j)
          if (tab::D[r][j] != 0.0) acc.noalias() += tab::D[r][j] * K.col(j);
        seg.F.col(3 + r) = h * acc;
      }
      out.dense.push(std::move(seg));
    }

    t = t_new;
    y = y_new;
    f0 = f_new;
    ++out.stats.steps;
  }
  out.t_final = t;
  out.y_final = y;
  return out;
}

}  // namespace erestab
