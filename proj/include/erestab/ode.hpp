#pragma once

#include <boost/math/constants/constants.hpp>
#include <optional>
#include <string>
#include <vector>

#include "dop853.hpp"
#include "kepler.hpp"
#include "symplectic.hpp"

namespace erestab {

struct SystemBlock {
  int k;     // configuration dimension of the block (2 or 4); the block's B is 2k x 2k
  Matrix R;  // constant symmetric k x k
};

/// Essential part: a symplectic sum of blocks, each with B(theta) as in b_block.
struct EssentialSystem {
  double e = 0.0;
  std::vector<SystemBlock> blocks;
  std::string label;

  int dimension() const {
    int d = 0;
    for (const auto& b : blocks) d += 2 * b.k;
    return d;
  }
};

inline void validate(const EssentialSystem& sys) {
  Eccentricity{sys.e};
  if (sys.blocks.empty()) throw ValidationError("essential system has no blocks");
  for (const auto& b : sys.blocks) {
    if (b.k != 2 && b.k != 4) throw ValidationError("block size must be 2 or 4");
    if (b.R.rows() != b.k || b.R.cols() != b.k) throw ValidationError("block R has the wrong shape");
    if ((b.R - b.R.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw ValidationError("block R must be symmetric");
  }
}

struct BlockReport {
  Matrix matrix;
  std::optional<StabilityClass> classification;  // only for 4x4 blocks
  bool linearly_stable = false;
};

struct MonodromyResult {
  Matrix matrix;  // full fundamental matrix at theta_end
  std::vector<BlockReport> blocks;
  IntegratorStats stats;
  std::vector<std::string> warnings;
};

/// Fundamental solution with a queryable dense path.
class FundamentalSolution {
 public:
  FundamentalSolution(std::vector<int> dims, std::vector<DenseOutput> paths, MonodromyResult end)
      : dims_(std::move(dims)), paths_(std::move(paths)), end_(std::move(end)) {}

  const MonodromyResult& result() const { return end_; }
  const Matrix& at_end() const { return end_.matrix; }

  Matrix block_at(std::size_t i, double theta) const {
    const int d = dims_[i];
    const Eigen::VectorXd v = paths_[i](theta);
    return Eigen::Map<const Matrix>(v.data(), d, d);
  }

  Matrix at(double theta) const {
    Matrix out = block_at(0, theta);
    for (std::size_t i = 1; i < paths_.size(); ++i) out = diamond(out, block_at(i, theta));
    return out;
  }

 private:
  std::vector<int> dims_;
  std::vector<DenseOutput> paths_;
  MonodromyResult end_;
};

/// Integrates gamma' = J B gamma for one block from (t0, Y0) to t1.
inline OdeSolution integrate_block(double e, const Matrix& R, double t0, const Matrix& Y0, double t1,
                                   const OdeOptions& opt) {
  const Eigen::Index d = 2 * R.rows();
  const Matrix J = standard_J(static_cast<int>(d));
  auto rhs = [&](double t, const Eigen::VectorXd& y, Eigen::VectorXd& dy) {
    const Eigen::Map<const Matrix> G(y.data(), d, y.size() / d);
    Eigen::Map<Matrix> dG(dy.data(), d, y.size() / d);
    dG.noalias() = (J * b_block(e, t, R)) * G;
  };
  const Eigen::VectorXd y0 = Eigen::Map<const Eigen::VectorXd>(Y0.data(), Y0.size());
  return integrate_dop853(rhs, t0, y0, t1, opt);
}

inline FundamentalSolution integrate_fundamental(const EssentialSystem& sys, double theta_end, double rel_tol = 1e-12,
                                                 double abs_tol = 1e-12, double classify_tol = 1e-7) {
  validate(sys);
  const double two_pi = 2 * boost::math::constants::pi<double>();
  if (!(theta_end > 0 && theta_end <= two_pi * (1 + 1e-14)))
    throw ValidationError("theta_end must lie in (0, 2 pi]");
  auto in_range = [](double x) { return x >= 1e-14 && x <= 1e-3; };
  if (!in_range(rel_tol) || !in_range(abs_tol)) throw ValidationError("tolerances must lie in [1e-14, 1e-3]");

  OdeOptions opt;
  opt.rtol = rel_tol;
  opt.atol = abs_tol;
  MonodromyResult res;
  if (sys.e > 0.99) res.warnings.push_back("eccentricity above 0.99: integration accuracy is not guaranteed");

  std::vector<int> dims;
  std::vector<DenseOutput> paths;
  for (const auto& blk : sys.blocks) {
    const int d = 2 * blk.k;
    OdeSolution sol = integrate_block(sys.e, blk.R, 0.0, Matrix::Identity(d, d), theta_end, opt);
    BlockReport br;
    br.matrix = Eigen::Map<const Matrix>(sol.y_final.data(), d, d);
    res.stats.steps += sol.stats.steps;
    res.stats.rejected += sol.stats.rejected;
    res.stats.rhs_evals += sol.stats.rhs_evals;
    res.stats.error_estimate += sol.stats.error_estimate;
    dims.push_back(d);
    paths.push_back(std::move(sol.dense));
    res.blocks.push_back(std::move(br));
  }
  res.matrix = res.blocks[0].matrix;
  for (std::size_t i = 1; i < res.blocks.size(); ++i) res.matrix = diamond(res.matrix, res.blocks[i].matrix);

  for (auto& br : res.blocks) {
    try {
      if (br.matrix.rows() == 4) br.classification = classify_monodromy4(br.matrix, classify_tol);
      br.linearly_stable = is_linearly_stable(br.matrix, classify_tol);
    } catch (const ValidationError&) {
      br.classification = StabilityClass::Degenerate;
      br.linearly_stable = false;
      res.warnings.push_back("block failed the symplecticity check at the classification tolerance");
    }
  }
  return FundamentalSolution(std::move(dims), std::move(paths), std::move(res));
}

/// gamma(2 pi) at the default 1e-12 tolerances, with every 4x4 block classified.
inline MonodromyResult monodromy(const EssentialSystem& sys, double classify_tol = 1e-7) {
  return integrate_fundamental(sys, 2 * boost::math::constants::pi<double>(), 1e-12, 1e-12, classify_tol).result();
}

}  // namespace erestab
