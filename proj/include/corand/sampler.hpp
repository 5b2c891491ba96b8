#pragma once

#include "corand/dataset.hpp"
#include "corand/rng.hpp"
#include "corand/tiling.hpp"

namespace corand {

// Uniform draw from the permutation vectors allowed by `t`: one shuffle of
// each tile's rows shared by the tile's columns, and one independent
// shuffle of the uncovered rows of every column. Substreams are keyed by
// (draw index, tile id) and (draw index, column).
PermutationVector sample_permutation(const Tiling& t, const SeededRng& rng, std::uint64_t draw);

// Consumes the next draw index of `rng`.
PermutationVector sample_permutation(const Tiling& t, SeededRng& rng);

// out(i, j) = x(p(i, j), j).
template <typename Derived>
Matrix<typename Derived::Scalar> apply(const Eigen::MatrixBase<Derived>& x, const PermutationVector& p) {
  if (x.rows() != p.rows() || x.cols() != p.cols()) {
    throw Error("permutation.dimension_mismatch", "permutation vector does not match data dimensions");
  }
  Matrix<typename Derived::Scalar> out(x.rows(), x.cols());
  for (Index j = 0; j < x.cols(); ++j) {
    for (Index i = 0; i < x.rows(); ++i) out(i, j) = x(p(i, j), j);
  }
  return out;
}

Dataset apply(const Dataset& d, const PermutationVector& p);

}  // namespace corand
