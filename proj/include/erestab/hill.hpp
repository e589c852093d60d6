#pragma once

// Hill's method for the Sturm-Liouville operator
//   A = -d^2/dtheta^2 I_k - 2 JJ d/dtheta + R / (1 + e cos theta)
// on functions with y(theta + 2 pi) = omega y(theta), omega = +1 or -1.

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "configurations.hpp"
#include "kepler.hpp"
#include "ode.hpp"

namespace erestab {

using MatrixC = Eigen::MatrixXcd;

struct SturmLiouvilleSpec {
  int k;
  Matrix R;
  double e;
};

inline void validate(const SturmLiouvilleSpec& s) {
  Eccentricity{s.e};
  if (s.k != 2 && s.k != 4) throw ValidationError("Sturm-Liouville block size must be 2 or 4");
  if (s.R.rows() != s.k || s.R.cols() != s.k) throw ValidationError("R has the wrong shape");
  if ((s.R - s.R.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw ValidationError("R must be symmetric");
}

struct HillMatrix {
  int omega;
  int K;
  MatrixC matrix;
  std::vector<double> modes;  // frequency of each k-block, in order
};

struct IndexResult {
  int morse = 0;
  int nullity = 0;
  int K = 0;
  std::vector<double> smallest_abs_eigs;  // signed, ordered by magnitude
};

/// Fourier coefficient c_n of 1/(1 + e cos theta).
inline double hill_coefficient(double e, int n) {
  const double r = std::sqrt(1 - e * e);
  const double q = e / (1 + r);
  return std::pow(-q, std::abs(n)) / r;
}

inline int default_modes(int k) { return k == 2 ? 128 : 192; }

namespace detail {

inline void check_omega(int omega) {
  if (omega != 1 && omega != -1) throw ValidationError("only omega = 1 and omega = -1 are supported");
}

/// Frequencies j + phi; for omega = -1 they come in pairs (nu, -nu) so the basis stays closed under conjugation.
inline std::vector<double> hill_modes(int omega, int K) {
  std::vector<double> m;
  if (omega == 1)
    for (int j = -K; j <= K; ++j) m.push_back(j);
  else
    for (int j = -K; j < K; ++j) m.push_back(j + 0.5);
  return m;
}

inline Matrix block_J(int k) {
  Matrix JJ = Matrix::Zero(k, k);
  for (int i = 0; i < k; i += 2) JJ.block(i, i, 2, 2) = J2();
  return JJ;
}

/// Toeplitz part: block (r, c) is c_{nu_r - nu_c} W.
inline MatrixC toeplitz(double e, const Matrix& W, const std::vector<double>& modes) {
  const Eigen::Index k = W.rows(), n = static_cast<Eigen::Index>(modes.size());
  MatrixC H = MatrixC::Zero(k * n, k * n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) {
      const double coef = hill_coefficient(e, static_cast<int>(std::lround(modes[r] - modes[c])));
      if (coef == 0.0) continue;
      H.block(r * k, c * k, k, k) = (coef * W).cast<std::complex<double>>();
    }
  return H;
}

/// Unitary change to the real basis cos(nu theta), sin(nu theta); the operator is real, so the result is real symmetric.
inline Matrix to_real_basis(const MatrixC& H, const std::vector<double>& modes, int k) {
  const Eigen::Index n = static_cast<Eigen::Index>(modes.size());
  auto index_of = [&](double nu) {
    for (Eigen::Index i = 0; i < n; ++i)
      if (std::abs(modes[i] - nu) < 1e-12) return i;
    throw InvalidState("mode list is not symmetric");
  };
  // each real basis vector is a combination of at most two complex basis vectors
  struct Column {
    Eigen::Index p, q;
    std::complex<double> wp, wq;
  };
  std::vector<Column> cols;
  const double s = 1 / std::sqrt(2.0);
  const std::complex<double> I(0, 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double nu = modes[i];
    if (nu < 0) continue;
    for (int a = 0; a < k; ++a) {
      const Eigen::Index p = i * k + a;
      if (nu == 0) {
        cols.push_back({p, p, 1.0, 0.0});
        continue;
      }
      const Eigen::Index q = index_of(-nu) * k + a;
      cols.push_back({p, q, s, s});
      cols.push_back({p, q, -I * s, I * s});
    }
  }
  const Eigen::Index m = static_cast<Eigen::Index>(cols.size());
  Matrix S(m, m);
  for (Eigen::Index x = 0; x < m; ++x)
    for (Eigen::Index y = x; y < m; ++y) {
      const auto& u = cols[x];
      const auto& v = cols[y];
      std::complex<double> z = std::conj(u.wp) * (H(u.p, v.p) * v.wp + H(u.p, v.q) * v.wq);
      if (u.wq != 0.0) z += std::conj(u.wq) * (H(u.q, v.p) * v.wp + H(u.q, v.q) * v.wq);
      S(x, y) = S(y, x) = z.real();
    }
  return S;
}

}  // namespace detail

inline HillMatrix assemble_hill(const SturmLiouvilleSpec& spec, int omega, int K) {
  validate(spec);
  detail::check_omega(omega);
  if (K < 8) throw ValidationError("Hill truncation needs K >= 8");
  HillMatrix h{omega, K, {}, detail::hill_modes(omega, K)};
  h.matrix = detail::toeplitz(spec.e, spec.R, h.modes);
  const Matrix JJ = detail::block_J(spec.k);
  const std::complex<double> I(0, 1);
  for (std::size_t r = 0; r < h.modes.size(); ++r) {
    const double nu = h.modes[r];
    const Eigen::Index o = static_cast<Eigen::Index>(r) * spec.k;
    h.matrix.block(o, o, spec.k, spec.k) +=
        (nu * nu) * MatrixC::Identity(spec.k, spec.k) - 2.0 * I * nu * JJ.cast<std::complex<double>>();
  }
  return h;
}

inline Eigen::VectorXd hill_eigenvalues(const HillMatrix& h, int k) {
  const Matrix S = detail::to_real_basis(h.matrix, h.modes, k);
  return Eigen::SelfAdjointEigenSolver<Matrix>(S, Eigen::EigenvaluesOnly).eigenvalues();
}

/// Size of the low-frequency part of the operator: max(1, sup |R / (1 + e cos theta)|).
inline double null_scale(const SturmLiouvilleSpec& spec) {
  const double r = Eigen::SelfAdjointEigenSolver<Matrix>(spec.R, Eigen::EigenvaluesOnly).eigenvalues().cwiseAbs().maxCoeff();
  return std::max(1.0, r / (1 - spec.e));
}

/// Counts at one truncation level; null_tol is relative to null_scale.
inline IndexResult count_index(const SturmLiouvilleSpec& spec, int omega, int K, double null_tol = 1e-8) {
  const auto ev = hill_eigenvalues(assemble_hill(spec, omega, K), spec.k);
  const double tol = null_tol * null_scale(spec);
  IndexResult r;
  r.K = K;
  std::vector<double> mags;
  for (double l : ev) {
    if (l < -tol) ++r.morse;
    else if (std::abs(l) <= tol) ++r.nullity;
    mags.push_back(l);
  }
  std::sort(mags.begin(), mags.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  mags.resize(std::min<std::size_t>(mags.size(), 8));
  r.smallest_abs_eigs = mags;
  return r;
}

struct IndexNotConverged : NumericFailure {
  IndexResult coarse, fine;
  IndexNotConverged(IndexResult c, IndexResult f)
      : NumericFailure("omega-index changed between truncation levels", 0.0, 0.0), coarse(std::move(c)), fine(std::move(f)) {}
};

/// omega-Morse index and nullity, accepted once K and 2K agree; K is doubled at most twice on disagreement.
inline IndexResult morse_index(const SturmLiouvilleSpec& spec, int omega, std::optional<int> K = std::nullopt,
                               double null_tol = 1e-8) {
  int k = K.value_or(default_modes(spec.k));
  IndexResult coarse = count_index(spec, omega, k, null_tol);
  for (int attempt = 0; attempt < 3; ++attempt) {
    IndexResult fine = count_index(spec, omega, 2 * k, null_tol);
    if (fine.morse == coarse.morse && fine.nullity == coarse.nullity) return coarse;
    if (attempt == 2) throw IndexNotConverged(coarse, fine);
    coarse = fine;
    k *= 2;
  }
  throw InvalidState("unreachable");
}

/// Sum of the per-block indices of an essential system.
inline IndexResult morse_index(const EssentialSystem& sys, int omega, std::optional<int> K = std::nullopt,
                               double null_tol = 1e-8) {
  IndexResult total;
  for (const auto& b : sys.blocks) {
    const auto r = morse_index(SturmLiouvilleSpec{b.k, b.R, sys.e}, omega, K, null_tol);
    total.morse += r.morse;
    total.nullity += r.nullity;
    total.K = std::max(total.K, r.K);
    total.smallest_abs_eigs.insert(total.smallest_abs_eigs.end(), r.smallest_abs_eigs.begin(),
                                   r.smallest_abs_eigs.end());
  }
  std::sort(total.smallest_abs_eigs.begin(), total.smallest_abs_eigs.end());
  return total;
}

/// kappa with (A + kappa B) v = 0, where B discretises W / (1 + e cos theta); sorted by |kappa|.
inline std::vector<std::complex<double>> generalized_eigs(const SturmLiouvilleSpec& base, const Matrix& W, int omega,
                                                          int K, double null_tol = 1e-8) {
  validate(base);
  if (W.rows() != base.k || W.cols() != base.k) throw ValidationError("bump weight has the wrong shape");
  const HillMatrix A = assemble_hill(base, omega, K);
  const Matrix As = detail::to_real_basis(A.matrix, A.modes, base.k);
  const Matrix Bs = detail::to_real_basis(detail::toeplitz(base.e, W, A.modes), A.modes, base.k);
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Matrix>(As, Eigen::EigenvaluesOnly).eigenvalues();
  if (ev.cwiseAbs().minCoeff() <= null_tol * null_scale(base))
    throw InvalidState("base operator is degenerate; generalized eigenvalues are undefined");
  const Matrix M = Eigen::PartialPivLU<Matrix>(As).solve(Bs);
  const Eigen::VectorXcd mu = Eigen::EigenSolver<Matrix>(M, false).eigenvalues();
  const double scale = mu.cwiseAbs().maxCoeff();
  std::vector<std::complex<double>> kappa;
  if (scale == 0.0) return kappa;
  for (const auto& m : mu)
    if (std::abs(m) > 1e-10 * scale) kappa.push_back(-1.0 / m);
  std::sort(kappa.begin(), kappa.end(), [](auto a, auto b) { return std::abs(a) < std::abs(b); });
  return kappa;
}

}  // namespace erestab
