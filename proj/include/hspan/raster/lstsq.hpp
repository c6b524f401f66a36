#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hspan/core/error.hpp"
#include "hspan/core/grid.hpp"
#include "hspan/raster/stats.hpp"

namespace hspan {

struct LeastSquaresFit {
  Eigen::VectorXd coefficients;
  double r_squared = std::numeric_limits<double>::quiet_NaN();
  double ss_res = 0.0;
  double ss_tot = 0.0;
  Eigen::Index rank = 0;
  // SS_tot == 0: the target is constant and R^2 is undefined.
  bool degenerate = false;
};

/// Row-streamed linear least squares.
///
/// Rows of the augmented system [design | target] are folded into a
/// (k+1) x (k+1) triangular factor by repeated Householder QR, so memory does
/// not grow with the number of observations. The final triangular system is
/// solved with a complete orthogonal decomposition, which yields the
/// minimum-norm solution for rank-deficient designs. The residual sum of
/// squares falls out of the last diagonal entry of the factor.
class LeastSquaresAccumulator {
 public:
  explicit LeastSquaresAccumulator(Eigen::Index columns)
      : k_(columns), r_(Eigen::MatrixXd::Zero(columns + 1, columns + 1)) {
    detail::require(columns >= 1, "least_squares: design needs at least one column");
  }

  void add_rows(const Eigen::Ref<const Eigen::MatrixXd>& design,
                const Eigen::Ref<const Eigen::VectorXd>& target) {
    detail::require(design.cols() == k_, "least_squares: column count mismatch");
    detail::require(design.rows() == target.size(), "least_squares: row count mismatch");
    if (design.rows() == 0) return;

    Eigen::MatrixXd stack(k_ + 1 + design.rows(), k_ + 1);
    stack.topRows(k_ + 1) = r_;
    stack.bottomLeftCorner(design.rows(), k_) = design;
    stack.bottomRightCorner(design.rows(), 1) = target;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(stack);
    r_ = qr.matrixQR().topRows(k_ + 1).triangularView<Eigen::Upper>();

    // Welford update of the target's total sum of squares.
    for (Eigen::Index i = 0; i < target.size(); ++i) {
      ++n_;
      const double delta = target[i] - mean_;
      mean_ += delta / static_cast<double>(n_);
      m2_ += delta * (target[i] - mean_);
    }
  }

  Eigen::Index rows() const { return n_; }

  LeastSquaresFit solve() const {
    detail::require(n_ >= k_ + 1, "least_squares: need n >= k+1 observations");
    const Eigen::MatrixXd r11 = r_.topLeftCorner(k_, k_);
    const Eigen::VectorXd r12 = r_.topRightCorner(k_, 1);
    const double r22 = r_(k_, k_);

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(r11);
    LeastSquaresFit fit;
    fit.coefficients = cod.solve(r12);
    fit.rank = cod.rank();
    fit.ss_res = r22 * r22 + (r11 * fit.coefficients - r12).squaredNorm();
    fit.ss_tot = m2_;
    if (m2_ == 0.0) {
      fit.degenerate = true;
    } else {
      fit.r_squared = 1.0 - fit.ss_res / fit.ss_tot;
    }
    return fit;
  }

 private:
  Eigen::Index k_;
  Eigen::MatrixXd r_;
  Eigen::Index n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Least squares fit of `target` on the columns of `design`. With
/// `add_intercept`, a trailing column of ones is appended and its coefficient
/// is the last entry of the result.
inline LeastSquaresFit least_squares(const Eigen::Ref<const Eigen::MatrixXd>& design,
                                     const Eigen::Ref<const Eigen::VectorXd>& target,
                                     bool add_intercept = false) {
  const Eigen::Index k = design.cols() + (add_intercept ? 1 : 0);
  LeastSquaresAccumulator acc(k);
  if (add_intercept) {
    Eigen::MatrixXd full(design.rows(), k);
    full.leftCols(design.cols()) = design;
    full.col(k - 1).setOnes();
    acc.add_rows(full, target);
  } else {
    acc.add_rows(design, target);
  }
  return acc.solve();
}

/// Regresses `target` on a set of equally sized bands plus an intercept,
/// streaming pixels in fixed-size chunks. Columns are mean-centered before
/// the fit; the returned coefficients are expressed in the original
/// (uncentered) variables, one per band with the intercept last.
template <class T, class U>
LeastSquaresFit regress_on_bands(std::span<const GridView<const T>> bands, GridView<const U> target) {
  detail::require(!bands.empty(), "regression: no bands");
  const std::size_t n = target.size();
  for (const auto& b : bands)
    detail::require(b.size() == n, "regression: band/target size mismatch");
  const auto k = static_cast<Eigen::Index>(bands.size());

  Eigen::VectorXd means(k);
  for (Eigen::Index b = 0; b < k; ++b)
    means[b] = moments<T>(bands[static_cast<std::size_t>(b)].data).mean;

  constexpr std::size_t chunk = 4096;
  LeastSquaresAccumulator acc(k + 1);
  Eigen::MatrixXd design;
  Eigen::VectorXd y;
  for (std::size_t start = 0; start < n; start += chunk) {
    const std::size_t len = std::min(chunk, n - start);
    const auto rows = static_cast<Eigen::Index>(len);
    design.resize(rows, k + 1);
    y.resize(rows);
    for (Eigen::Index b = 0; b < k; ++b) {
      const auto& data = bands[static_cast<std::size_t>(b)].data;
      for (std::size_t i = 0; i < len; ++i)
        design(static_cast<Eigen::Index>(i), b) = static_cast<double>(data[start + i]) - means[b];
    }
    design.col(k).setOnes();
    for (std::size_t i = 0; i < len; ++i)
      y[static_cast<Eigen::Index>(i)] = static_cast<double>(target.data[start + i]);
    acc.add_rows(design, y);
  }
  LeastSquaresFit fit = acc.solve();
  fit.coefficients[k] -= fit.coefficients.head(k).dot(means);
  return fit;
}

}  // namespace hspan
