#pragma once

#include "corand/dataset.hpp"
#include "corand/sampler.hpp"
#include "corand/tiling.hpp"

namespace corand {

// Mean of `y` over each cell's permutation group: the rows of the tile
// covering the cell, or the column's uncovered rows when no tile does.
template <typename Derived>
Matrix<typename Derived::Scalar> group_means(const Eigen::MatrixBase<Derived>& y, const Tiling& t) {
  using Scalar = typename Derived::Scalar;
  const Index n = y.rows();
  const Index m = y.cols();
  Matrix<Scalar> a(n, m);
  for (const auto& [id, tile] : t.tiles()) {
    const auto count = static_cast<Scalar>(tile.rows.size());
    for (Index c : tile.cols) {
      Scalar sum(0);
      for (Index i : tile.rows) sum += y(i, c);
      const Scalar mean = sum / count;
      for (Index i : tile.rows) a(i, c) = mean;
    }
  }
  for (Index c = 0; c < m; ++c) {
    Scalar sum(0);
    Index count = 0;
    for (Index i = 0; i < n; ++i) {
      if (t.id(i, c) == 0) {
        sum += y(i, c);
        ++count;
      }
    }
    if (count == 0) continue;
    const Scalar mean = sum / static_cast<Scalar>(count);
    for (Index i = 0; i < n; ++i) {
      if (t.id(i, c) == 0) a(i, c) = mean;
    }
  }
  return a;
}

// Covariance of the uniform distribution over the data sets a tiling
// allows. Rows sharing a tile in both columns contribute their own values;
// all other rows contribute the product of their group means. The diagonal
// is the marginal variance, which every allowed permutation preserves.
template <typename Derived>
Matrix<typename Derived::Scalar> analytical_covariance(const Eigen::MatrixBase<Derived>& y, const Tiling& t) {
  using Scalar = typename Derived::Scalar;
  if (y.rows() != t.rows() || y.cols() != t.cols()) {
    throw Error("covariance.dimension_mismatch", "data and tiling dimensions differ");
  }
  const Matrix<Scalar> a = group_means(y, t);
  Matrix<Scalar> cov = a.transpose() * a;
  for (const auto& [id, tile] : t.tiles()) {
    if (tile.cols.size() < 2) continue;
    const Matrix<Scalar> ys = y(tile.rows, tile.cols);
    const Matrix<Scalar> as = a(tile.rows, tile.cols);
    const Matrix<Scalar> delta = ys.transpose() * ys - as.transpose() * as;
    cov(tile.cols, tile.cols) += delta;
  }
  cov /= static_cast<Scalar>(y.rows());
  Matrix<Scalar> sym = (cov + cov.transpose()) / Scalar(2);
  sym.diagonal() = y.colwise().squaredNorm().transpose() / static_cast<Scalar>(y.rows());
  return sym;
}

inline MatrixXd analytical_covariance(const CenteredData& y, const Tiling& t) {
  return analytical_covariance(y.values, t);
}

// Average of the 1/n second-moment matrix of `draws` permuted copies of y.
// Permutation preserves the column means, so no per-draw recentring.
template <typename Derived>
Matrix<typename Derived::Scalar> montecarlo_covariance(const Eigen::MatrixBase<Derived>& y, const Tiling& t,
                                                        Index draws, SeededRng& rng) {
  using Scalar = typename Derived::Scalar;
  if (draws < 1) throw Error("covariance.invalid", "Monte-Carlo covariance needs at least one draw");
  Matrix<Scalar> acc = Matrix<Scalar>::Zero(y.cols(), y.cols());
  for (Index k = 0; k < draws; ++k) {
    const Matrix<Scalar> yp = apply(y, sample_permutation(t, rng));
    acc.noalias() += yp.transpose() * yp;
  }
  return acc / (static_cast<Scalar>(y.rows()) * static_cast<Scalar>(draws));
}

inline MatrixXd montecarlo_covariance(const CenteredData& y, const Tiling& t, Index draws, SeededRng& rng) {
  return montecarlo_covariance(y.values, t, draws, rng);
}

}  // namespace corand
