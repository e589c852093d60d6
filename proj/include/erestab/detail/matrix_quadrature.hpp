#pragma once

// Globally adaptive Gauss-Kronrod (7/15) for matrix-valued integrands.  Boost.Math supplies the
// nodes and weights; its own integrators only accept scalar results.

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <queue>
#include <vector>

#include "../errors.hpp"

namespace erestab::detail {

struct QuadratureRule {
  std::vector<double> x;         // non-negative Kronrod abscissae
  std::vector<double> wk;        // Kronrod weights
  std::vector<double> wg;        // Gauss weight at the same node, 0 when the node is Kronrod-only
};

inline const QuadratureRule& gk15() {
  static const QuadratureRule rule = [] {
    using boost::math::quadrature::gauss;
    using boost::math::quadrature::gauss_kronrod;
    QuadratureRule r;
    const auto& kx = gauss_kronrod<double, 15>::abscissa();
    const auto& kw = gauss_kronrod<double, 15>::weights();
    const auto& gx = gauss<double, 7>::abscissa();
    const auto& gw = gauss<double, 7>::weights();
    for (std::size_t i = 0; i < kx.size(); ++i) {
      r.x.push_back(kx[i]);
      r.wk.push_back(kw[i]);
      double g = 0;
      for (std::size_t j = 0; j < gx.size(); ++j)
        if (std::abs(gx[j] - kx[i]) < 1e-14) g = gw[j];
      r.wg.push_back(g);
    }
    return r;
  }();
  return rule;
}

struct MatrixQuadratureResult {
  Eigen::MatrixXd value;
  double error = 0;
  int evaluations = 0;
};

/// Integrates f over [a, b]; stops once the summed error estimate is below max(abs_tol, rel_tol * |I|_max).
template <class F>
MatrixQuadratureResult integrate_matrix(F&& f, double a, double b, double abs_tol, double rel_tol,
                                        int max_intervals = 4000) {
  const auto& rule = gk15();
  struct Piece {
    double a, b, err;
    Eigen::MatrixXd value;
    bool operator<(const Piece& o) const { return err < o.err; }
  };
  MatrixQuadratureResult out;
  auto eval = [&](double lo, double hi) {
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    Eigen::MatrixXd k, g;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      const bool centre = rule.x[i] == 0.0;
      Eigen::MatrixXd fx = f(c + h * rule.x[i]);
      if (!centre) fx += f(c - h * rule.x[i]);
      out.evaluations += centre ? 1 : 2;
      if (k.size() == 0) {
        k = Eigen::MatrixXd::Zero(fx.rows(), fx.cols());
        g = k;
      }
      k += rule.wk[i] * fx;
      if (rule.wg[i] != 0) g += rule.wg[i] * fx;
    }
    return Piece{lo, hi, h * (k - g).cwiseAbs().maxCoeff(), h * k};
  };
  std::priority_queue<Piece> heap;
  heap.push(eval(a, b));
  Eigen::MatrixXd total = heap.top().value;
  double err = heap.top().err;
  int intervals = 1;
  while (err > std::max(abs_tol, rel_tol * total.cwiseAbs().maxCoeff())) {
    if (intervals >= max_intervals)
      throw NumericFailure("matrix quadrature exceeded its interval budget", a, err);
    Piece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Piece left = eval(worst.a, mid), right = eval(mid, worst.b);
    total += left.value + right.value - worst.value;
    err += left.err + right.err - worst.err;
    heap.push(std::move(left));
    heap.push(std::move(right));
    ++intervals;
  }
  // re-sum to shed the drift of the running update
  total.setZero();
  err = 0;
  while (!heap.empty()) {
    total += heap.top().value;
    err += heap.top().err;
    heap.pop();
  }
  out.value = total;
  out.error = err;
  return out;
}

}  // namespace erestab::detail
