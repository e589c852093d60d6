#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "errors.hpp"

namespace erestab {

using Matrix = Eigen::MatrixXd;
using Mat4 = Eigen::Matrix4d;
using Mat2 = Eigen::Matrix2d;
using cplx = std::complex<double>;

enum class StabilityClass { EE, EH, HH, CS, Degenerate };

inline std::string to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::EE: return "EE";
    case StabilityClass::EH: return "EH";
    case StabilityClass::HH: return "HH";
    case StabilityClass::CS: return "CS";
    case StabilityClass::Degenerate: return "Degenerate";
  }
  return "Degenerate";
}

inline StabilityClass stability_class_from_string(const std::string& s) {
  if (s == "EE") return StabilityClass::EE;
  if (s == "EH") return StabilityClass::EH;
  if (s == "HH") return StabilityClass::HH;
  if (s == "CS") return StabilityClass::CS;
  if (s == "Degenerate") return StabilityClass::Degenerate;
  throw ValidationError("unknown stability class '" + s + "'");
}

struct EigenCluster {
  cplx value;
  int algebraic_multiplicity = 0;
  int geometric_multiplicity = 0;
};

/// Standard symplectic form [[0, -I], [I, 0]] of size 2n.
inline Matrix standard_J(int dim) {
  if (dim <= 0 || dim % 2 != 0) throw ValidationError("symplectic dimension must be positive and even");
  const int n = dim / 2;
  Matrix J = Matrix::Zero(dim, dim);
  J.topRightCorner(n, n) = -Matrix::Identity(n, n);
  J.bottomLeftCorner(n, n) = Matrix::Identity(n, n);
  return J;
}

inline const Mat4& J4() {
  static const Mat4 j = standard_J(4);
  return j;
}

inline const Mat2& J2() {
  static const Mat2 j = standard_J(2);
  return j;
}

/// Rotation R(theta) = [[cos, -sin], [sin, cos]].
inline Mat2 rotation(double theta) {
  Mat2 r;
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

namespace detail {
inline void require_even_square(const Matrix& M, const char* who) {
  if (M.rows() != M.cols()) throw ValidationError(std::string(who) + ": matrix must be square");
  if (M.rows() == 0 || M.rows() % 2 != 0) throw ValidationError(std::string(who) + ": dimension must be even");
  if (!M.allFinite()) throw ValidationError(std::string(who) + ": non-finite entry");
}
}  // namespace detail

/// Max-entry norm of M^T J M - J.
inline double symplectic_defect(const Matrix& M) {
  detail::require_even_square(M, "symplectic_defect");
  const Matrix J = standard_J(static_cast<int>(M.rows()));
  return (M.transpose() * J * M - J).cwiseAbs().maxCoeff();
}

inline bool is_symplectic(const Matrix& M, double tol) {
  if (!(tol > 0)) throw ValidationError("is_symplectic: tol must be positive");
  return symplectic_defect(M) <= tol;
}

/// Symplectic sum: interleaves the (q, p) halves of both arguments.
inline Matrix diamond(const Matrix& M1, const Matrix& M2) {
  detail::require_even_square(M1, "diamond");
  detail::require_even_square(M2, "diamond");
  const Eigen::Index i = M1.rows() / 2, j = M2.rows() / 2;
  Matrix out = Matrix::Zero(2 * (i + j), 2 * (i + j));
  out.block(0, 0, i, i) = M1.block(0, 0, i, i);
  out.block(0, i + j, i, i) = M1.block(0, i, i, i);
  out.block(i + j, 0, i, i) = M1.block(i, 0, i, i);
  out.block(i + j, i + j, i, i) = M1.block(i, i, i, i);
  out.block(i, i, j, j) = M2.block(0, 0, j, j);
  out.block(i, 2 * i + j, j, j) = M2.block(0, j, j, j);
  out.block(2 * i + j, i, j, j) = M2.block(j, 0, j, j);
  out.block(2 * i + j, 2 * i + j, j, j) = M2.block(j, j, j, j);
  return out;
}

inline std::vector<cplx> eigenvalues(const Matrix& M) {
  Eigen::EigenSolver<Matrix> es(M, false);
  if (es.info() != Eigen::Success) throw NumericFailure("eigensolver failed to converge");
  std::vector<cplx> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return out;
}

/// Groups eigenvalues by single linkage at cluster_tol and measures each group's
/// kernel dimension from the singular values of M - lambda I.
inline std::vector<EigenCluster> eigen_clusters(const Matrix& M, double cluster_tol) {
  if (!(cluster_tol > 0)) throw ValidationError("eigen_clusters: cluster_tol must be positive");
  if (M.rows() != M.cols()) throw ValidationError("eigen_clusters: matrix must be square");
  const auto ev = eigenvalues(M);
  const std::size_t n = ev.size();

  std::vector<int> label(n);
  for (std::size_t a = 0; a < n; ++a) label[a] = static_cast<int>(a);
  auto root = [&](int x) {
    while (label[x] != x) x = label[x] = label[label[x]];
    return x;
  };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (std::abs(ev[a] - ev[b]) <= cluster_tol) label[root(static_cast<int>(a))] = root(static_cast<int>(b));

  std::vector<EigenCluster> out;
  std::vector<int> seen;
  const double normM = M.norm();
  const Eigen::MatrixXcd Mc = M.cast<cplx>();
  for (std::size_t a = 0; a < n; ++a) {
    const int r = root(static_cast<int>(a));
    if (std::find(seen.begin(), seen.end(), r) != seen.end()) continue;
    seen.push_back(r);
    cplx sum = 0.0;
    int count = 0;
    for (std::size_t b = 0; b < n; ++b)
      if (root(static_cast<int>(b)) == r) {
        sum += ev[b];
        ++count;
      }
    const cplx lambda = sum / static_cast<double>(count);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Mc - lambda * Eigen::MatrixXcd::Identity(M.rows(), M.cols()));
    const auto& s = svd.singularValues();
    int nullity = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
      if (s[k] < cluster_tol * normM) ++nullity;
    out.push_back({lambda, count, std::clamp(nullity, 1, count)});
  }
  std::sort(out.begin(), out.end(), [](const EigenCluster& x, const EigenCluster& y) {
    if (x.value.real() != y.value.real()) return x.value.real() < y.value.real();
    return x.value.imag() < y.value.imag();
  });
  return out;
}

/// Spectral class of a 4x4 symplectic matrix; one tolerance serves both bands.
inline StabilityClass classify_monodromy4(const Matrix& M, double tol = 1e-7) {
  if (M.rows() != 4 || M.cols() != 4) throw ValidationError("classify_monodromy4: expected a 4x4 matrix");
  if (!is_symplectic(M, tol * 10 * std::max(1.0, M.cwiseAbs().maxCoeff())))
    throw ValidationError("classify_monodromy4: matrix is not symplectic");
  int elliptic = 0, hyperbolic = 0, saddle = 0;
  for (const cplx& l : eigenvalues(M)) {
    const bool circle = std::abs(std::abs(l) - 1.0) <= tol;
    const bool real = std::abs(l.imag()) <= tol;
    if (circle && real) return StabilityClass::Degenerate;
    if (std::abs(l) <= tol) return StabilityClass::Degenerate;
    if (circle) ++elliptic;
    else if (real) ++hyperbolic;
    else ++saddle;
  }
  if (elliptic == 4) return StabilityClass::EE;
  if (elliptic == 2 && hyperbolic == 2) return StabilityClass::EH;
  if (hyperbolic == 4) return StabilityClass::HH;
  if (saddle == 4) return StabilityClass::CS;
  return StabilityClass::Degenerate;
}

/// Spectrally stable and semisimple on the unit circle.
inline bool is_linearly_stable(const Matrix& M, double tol = 1e-7) {
  detail::require_even_square(M, "is_linearly_stable");
  if (!is_symplectic(M, tol * 10 * std::max(1.0, M.cwiseAbs().maxCoeff())))
    throw ValidationError("is_linearly_stable: matrix is not symplectic");
  for (const auto& c : eigen_clusters(M, tol)) {
    if (std::abs(std::abs(c.value) - 1.0) > tol) return false;
    if (c.geometric_multiplicity != c.algebraic_multiplicity) return false;
  }
  return true;
}

}  // namespace erestab
