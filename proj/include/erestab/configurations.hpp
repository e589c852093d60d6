#pragma once

#include <algorithm>
#include <boost/math/constants/constants.hpp>
#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ode.hpp"

namespace erestab {

namespace family {
struct Kepler {};
struct Lagrange {
  double beta;
};
struct Euler {
  double beta;
};
struct AlphaEta {
  double alpha, eta;
};
struct Gon {
  int n;
  double m;
  std::optional<int> l;  // a single block, or the full essential part when empty
};
}  // namespace family

using FamilySpec = std::variant<family::Kepler, family::Lagrange, family::Euler, family::AlphaEta, family::Gon>;

inline Mat2 n_tilde() { return Eigen::Vector2d(1.0, -1.0).asDiagonal(); }

inline double zeta(double alpha, double eta) { return std::max(std::abs(3.0 - (alpha + eta)), std::abs(eta - alpha)); }

inline Mat2 alpha_eta_R(double alpha, double eta) { return alpha * Mat2::Identity() + eta * n_tilde(); }

struct GonBlockData {
  int l;
  double P, S, Q, a, b;
  Matrix U;
  Matrix R;
};

struct GonData {
  int n;
  double m, sigma_n, mu;
  std::vector<GonBlockData> blocks;  // l = 1 .. floor(n/2)
};

inline GonData gon_data(int n, double m) {
  if (n < 3) throw ValidationError("gon_data: n must be at least 3");
  if (!(m > 0)) throw ValidationError("gon_data: central mass must be positive");
  const double pi = boost::math::constants::pi<double>();
  GonData g{n, m, 0.0, 0.0, {}};
  for (int i = 1; i < n; ++i) g.sigma_n += 0.5 / std::sin(pi * i / n);
  g.mu = g.sigma_n / 2 + m;

  for (int l = 1; l <= n / 2; ++l) {
    GonBlockData b{l, 0, 0, 0, 0, 0, {}, {}};
    for (int j = 1; j < n; ++j) {
      const double th = 2 * pi * j / n, thl = 2 * pi * j * l / n;
      const double d = 2 * std::sin(pi * j / n);
      const double w = 2 * d * d * d;
      b.P += (1 - std::cos(thl) * std::cos(th)) / w;
      b.S += std::sin(thl) * std::sin(th) / w;
      b.Q += (std::cos(th) - std::cos(thl)) / w;
    }
    b.a = b.P - 3 * b.Q + 2 * m;
    b.b = b.P + 3 * b.Q - m;
    if (l == 1) {
      const double c = 1.5 * std::sqrt(m * (m + n));
      const double x = (n + m) / 2.0, y = m / 2.0 + 2 * b.P;
      b.U = Matrix::Zero(4, 4);
      b.U(0, 0) = x, b.U(1, 1) = x, b.U(2, 2) = y, b.U(3, 3) = y;
      b.U(0, 2) = b.U(2, 0) = c;
      b.U(1, 3) = b.U(3, 1) = -c;
    } else if (2 * l == n) {
      b.U = Matrix::Zero(2, 2);
      b.U(0, 0) = b.a;
      b.U(1, 1) = b.b;
    } else {
      b.U = Matrix::Zero(4, 4);
      b.U(0, 0) = b.U(2, 2) = b.a;
      b.U(1, 1) = b.U(3, 3) = b.b;
      b.U(0, 3) = b.U(3, 0) = b.S;
      b.U(1, 2) = b.U(2, 1) = -b.S;
    }
    b.R = Matrix::Identity(b.U.rows(), b.U.cols()) + b.U / g.mu;
    g.blocks.push_back(std::move(b));
  }
  return g;
}

/// max Q_l over 2 <= l <= floor(n/2).
inline double q_max(int n) {
  const GonData g = gon_data(n, 1.0);  // Q_l does not depend on m
  double q = -INFINITY;
  for (const auto& b : g.blocks)
    if (b.l >= 2) q = std::max(q, b.Q);
  return q;
}

struct EnvelopeCorner {
  double alpha_check, alpha_hat, eta_check, eta_hat;
};

struct EnvelopeBlock {
  int l;
  bool exact;  // the l = n/2 block of an even gon
  EnvelopeCorner plus, minus;
};

struct AlphaEtaEnvelope {
  std::vector<EnvelopeBlock> blocks;
};

inline AlphaEtaEnvelope alpha_eta_envelope(const GonData& g) {
  AlphaEtaEnvelope env;
  const double mu = g.mu, m = g.m;
  const int n = g.n;
  for (const auto& b : g.blocks) {
    EnvelopeBlock eb{b.l, false, {}, {}};
    if (b.l == 1) {
      const double d_check = std::min(2 * b.P, n / 2.0), d_hat = std::max(2 * b.P, n / 2.0);
      const double ac = 1 + (d_check + m / 2) / mu, ah = 1 + (d_hat + m / 2) / mu;
      const double eta = 3 * std::sqrt(m * (m + n)) / (2 * mu);
      eb.plus = {ac, ah, eta, eta};
      eb.minus = {ac, ah, -eta, -eta};
    } else if (2 * b.l == n) {
      const double a = 1 + (b.a + b.b) / (2 * mu), eta = (b.a - b.b) / (2 * mu);
      eb.exact = true;
      eb.plus = eb.minus = {a, a, eta, eta};
    } else {
      const double ac = 1 + (b.a + b.b - 2 * b.S) / (2 * mu), ah = 1 + (b.a + b.b + 2 * b.S) / (2 * mu);
      const double eta = (b.a - b.b) / (2 * mu);
      eb.plus = eb.minus = {ac, ah, eta, eta};
    }
    env.blocks.push_back(eb);
  }
  return env;
}

inline AlphaEtaEnvelope alpha_eta_envelope(int n, double m) { return alpha_eta_envelope(gon_data(n, m)); }

/// The envelope corners written as matrices in the coordinates of U(l), for ordering checks.
inline std::pair<Matrix, Matrix> envelope_matrices(const EnvelopeBlock& eb) {
  auto paired = [](const EnvelopeCorner& p, const EnvelopeCorner& q, bool hat) {
    // l = 1 couples coordinates (1,3) and (2,4)
    const double ap = hat ? p.alpha_hat : p.alpha_check, ep = hat ? p.eta_hat : p.eta_check;
    const double aq = hat ? q.alpha_hat : q.alpha_check, eq = hat ? q.eta_hat : q.eta_check;
    Matrix M = Matrix::Zero(4, 4);
    M(0, 0) = M(2, 2) = ap;
    M(0, 2) = M(2, 0) = ep;
    M(1, 1) = M(3, 3) = aq;
    M(1, 3) = M(3, 1) = eq;
    return M;
  };
  auto diagonal = [](const EnvelopeCorner& p, bool hat) {
    const double a = hat ? p.alpha_hat : p.alpha_check, e = hat ? p.eta_hat : p.eta_check;
    return Eigen::Vector4d(a + e, a - e, a + e, a - e).asDiagonal().toDenseMatrix();
  };
  if (eb.exact) {
    Matrix M = Eigen::Vector2d(eb.plus.alpha_hat + eb.plus.eta_hat, eb.plus.alpha_hat - eb.plus.eta_hat).asDiagonal();
    return {M, M};
  }
  if (eb.l == 1) return {paired(eb.plus, eb.minus, false), paired(eb.plus, eb.minus, true)};
  return {Matrix(diagonal(eb.plus, false)), Matrix(diagonal(eb.plus, true))};
}

/// Largest zeta over every envelope corner; the quantity compared with 1/sqrt(g-tilde).
/// A corner with negative eta is the same comparison system with its two axes swapped,
/// so it enters through |eta|.
inline double xi_gon(int n, double m) {
  const auto env = alpha_eta_envelope(n, m);
  double xi = 0.0;
  for (const auto& b : env.blocks)
    for (const auto* c : {&b.plus, &b.minus}) {
      xi = std::max(xi, zeta(c->alpha_check, std::abs(c->eta_check)));
      xi = std::max(xi, zeta(c->alpha_hat, std::abs(c->eta_hat)));
    }
  return xi;
}

inline void validate(const FamilySpec& spec) {
  std::visit(
      [](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, family::Lagrange>) {
          if (!(f.beta >= 0 && f.beta <= 9)) throw ValidationError("Lagrange beta must lie in [0, 9]");
        } else if constexpr (std::is_same_v<F, family::Euler>) {
          if (!(f.beta >= 0 && f.beta <= 7)) throw ValidationError("Euler beta must lie in [0, 7]");
        } else if constexpr (std::is_same_v<F, family::AlphaEta>) {
          if (!(f.alpha >= 1 && f.eta >= 0)) throw ValidationError("need alpha >= 1 and eta >= 0");
        } else if constexpr (std::is_same_v<F, family::Gon>) {
          if (f.n < 3) throw ValidationError("gon needs n >= 3");
          if (!(f.m > 0)) throw ValidationError("gon needs m > 0");
          if (f.l && (*f.l < 1 || *f.l > f.n / 2)) throw ValidationError("gon block index must lie in [1, n/2]");
        }
      },
      spec);
}

/// Constant R matrices of the family's essential part, one per block.
inline std::vector<Matrix> essential_R(const FamilySpec& spec) {
  validate(spec);
  return std::visit(
      [](const auto& f) -> std::vector<Matrix> {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, family::Kepler>) {
          return {Matrix(kepler_R())};
        } else if constexpr (std::is_same_v<F, family::Lagrange>) {
          const double s = std::sqrt(9 - f.beta);
          return {Matrix(Eigen::Vector2d((3 + s) / 2, (3 - s) / 2).asDiagonal())};
        } else if constexpr (std::is_same_v<F, family::Euler>) {
          return {Matrix(Eigen::Vector2d(2 * f.beta + 3, -f.beta).asDiagonal())};
        } else if constexpr (std::is_same_v<F, family::AlphaEta>) {
          return {Matrix(alpha_eta_R(f.alpha, f.eta))};
        } else {
          const GonData g = gon_data(f.n, f.m);
          std::vector<Matrix> out;
          for (const auto& b : g.blocks)
            if (!f.l || *f.l == b.l) out.push_back(b.R);
          return out;
        }
      },
      spec);
}

inline std::string family_label(const FamilySpec& spec) {
  return std::visit(
      [](const auto& f) -> std::string {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, family::Kepler>) return "kepler";
        else if constexpr (std::is_same_v<F, family::Lagrange>) return "lagrange";
        else if constexpr (std::is_same_v<F, family::Euler>) return "euler";
        else if constexpr (std::is_same_v<F, family::AlphaEta>) return "alphaeta";
        else return "gon";
      },
      spec);
}

inline EssentialSystem essential_system(const FamilySpec& spec, Eccentricity e) {
  EssentialSystem sys;
  sys.e = e;
  sys.label = family_label(spec);
  for (auto& R : essential_R(spec)) sys.blocks.push_back({static_cast<int>(R.rows()), R});
  return sys;
}

}  // namespace erestab
