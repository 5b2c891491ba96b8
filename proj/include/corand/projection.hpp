#pragma once

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "corand/dataset.hpp"

namespace corand {

inline constexpr double kDefaultEigenFloor = 1e-8;

// Ratio of the variances of the two distributions along v.
template <typename DV, typename D1, typename D2>
typename DV::Scalar gain(const Eigen::MatrixBase<DV>& v, const Eigen::MatrixBase<D1>& sigma1,
                         const Eigen::MatrixBase<D2>& sigma2) {
  using Scalar = typename DV::Scalar;
  const Scalar num = v.dot(sigma1 * v);
  const Scalar den = v.dot(sigma2 * v);
  if (!(den > Scalar(0)) || !std::isfinite(den)) {
    throw Error("projection.zero_variance", "projected variance of the second distribution is zero");
  }
  return num / den;
}

template <typename Scalar>
struct WhiteningResult {
  Matrix<Scalar> w;
  // Second covariance with its eigenvalues floored; w' * regularized * w = I.
  Matrix<Scalar> regularized;
  Index clamped_count = 0;
};

// W = U diag(1 / sqrt(max(lambda, eps_rel * lambda_max))) from the
// eigendecomposition sigma2 = U diag(lambda) U'.
template <typename Derived>
WhiteningResult<typename Derived::Scalar> whiten(const Eigen::MatrixBase<Derived>& sigma2,
                                                 typename Derived::Scalar eps_rel = kDefaultEigenFloor) {
  using Scalar = typename Derived::Scalar;
  const Matrix<Scalar> sym = (sigma2 + sigma2.transpose()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(sym);
  if (solver.info() != Eigen::Success) throw Error("projection.eigen_failed", "eigendecomposition failed");

  const Vector<Scalar>& lambda = solver.eigenvalues();
  const Scalar lambda_max = lambda.maxCoeff();
  if (!(lambda_max > Scalar(0)) || sym.cwiseAbs().maxCoeff() <= std::numeric_limits<Scalar>::min()) {
    throw Error("projection.zero_covariance", "covariance matrix is numerically zero");
  }
  const Scalar floor = eps_rel * lambda_max;
  Vector<Scalar> floored = lambda;
  WhiteningResult<Scalar> out;
  for (Index k = 0; k < floored.size(); ++k) {
    if (floored(k) < floor) {
      floored(k) = floor;
      ++out.clamped_count;
    }
  }
  const Matrix<Scalar>& u = solver.eigenvectors();
  out.w = u * floored.cwiseSqrt().cwiseInverse().asDiagonal();
  out.regularized = u * floored.asDiagonal() * u.transpose();
  return out;
}

// Flips v so its largest-magnitude entry is positive (first one on ties).
template <typename Derived>
void sign_normalize(Eigen::MatrixBase<Derived>& v) {
  Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v(arg) < 0) v = -v;
}

template <typename Scalar>
struct Directions {
  Matrix<Scalar> vectors;  // m x count, unit columns
  Vector<Scalar> gains;
  Index clamped_count = 0;
};

// Directions maximizing v' S1 v / v' S2 v: principal directions of
// W' S1 W mapped back through the whitening matrix. Ordered by gain; near
// ties are broken lexicographically on the normalized vectors.
template <typename D1, typename D2>
Directions<typename D1::Scalar> optimal_directions(const Eigen::MatrixBase<D1>& sigma1,
                                                   const Eigen::MatrixBase<D2>& sigma2, Index count = 2,
                                                   typename D1::Scalar eps_rel = kDefaultEigenFloor) {
  using Scalar = typename D1::Scalar;
  const Index m = sigma1.rows();
  if (sigma1.cols() != m || sigma2.rows() != m || sigma2.cols() != m) {
    throw Error("projection.dimension_mismatch", "covariance matrices must be square and of equal size");
  }
  if (count < 1 || count > m) {
    throw Error("projection.too_few_columns",
                "cannot extract " + std::to_string(count) + " directions from " + std::to_string(m) + " columns");
  }
  const auto white = whiten(sigma2, eps_rel);
  Matrix<Scalar> inner = white.w.transpose() * sigma1 * white.w;
  inner = (inner + inner.transpose()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(inner);
  if (solver.info() != Eigen::Success) throw Error("projection.eigen_failed", "eigendecomposition failed");

  std::vector<Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index{0});
  std::reverse(order.begin(), order.end());

  Matrix<Scalar> candidates = white.w * solver.eigenvectors();
  for (Index k = 0; k < m; ++k) {
    candidates.col(k).normalize();
    auto col = candidates.col(k);
    sign_normalize(col);
  }

  const auto& lambda = solver.eigenvalues();
  auto near = [&](Index a, Index b) {
    const Scalar scale = std::max({Scalar(1), std::abs(lambda(a)), std::abs(lambda(b))});
    return std::abs(lambda(a) - lambda(b)) <= Scalar(1e-10) * scale;
  };
  auto lex_greater = [&](Index a, Index b) {
    for (Index r = 0; r < m; ++r) {
      if (candidates(r, a) != candidates(r, b)) return candidates(r, a) > candidates(r, b);
    }
    return false;
  };
  for (std::size_t start = 0; start < order.size();) {
    std::size_t end = start + 1;
    while (end < order.size() && near(order[end - 1], order[end])) ++end;
    std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(start), order.begin() + static_cast<std::ptrdiff_t>(end),
                     lex_greater);
    start = end;
  }

  Directions<Scalar> out;
  out.vectors.resize(m, count);
  out.gains.resize(count);
  out.clamped_count = white.clamped_count;
  for (Index k = 0; k < count; ++k) {
    out.vectors.col(k) = candidates.col(order[static_cast<std::size_t>(k)]);
    out.gains(k) = gain(out.vectors.col(k), sigma1, white.regularized);
  }
  return out;
}

// Names of the `count` entries of largest magnitude, descending.
std::vector<std::string> top_weight_labels(const VectorXd& direction, const std::vector<std::string>& names,
                                           Index count = 5);

struct ViewResult {
  MatrixXd directions;  // m x 2
  VectorXd gains;
  MatrixXd coords;  // n x 2
  std::vector<std::vector<std::string>> axis_labels;
};

ViewResult project(const Dataset& d, const Directions<double>& dirs, Index label_count = 5);

}  // namespace corand
