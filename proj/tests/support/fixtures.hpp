#pragma once

#include <random>
#include <vector>

#include "corand/tiling.hpp"
#include "oracle.hpp"

namespace fixtures {

inline corand::Tile to_tile(const oracle::Rect& r) {
  return corand::make_tile(corand::IndexSet(r.rows.begin(), r.rows.end()),
                           corand::IndexSet(r.cols.begin(), r.cols.end()));
}

inline std::vector<corand::Tile> to_tiles(const std::vector<oracle::Rect>& rs) {
  std::vector<corand::Tile> out;
  for (const auto& r : rs) out.push_back(to_tile(r));
  return out;
}

inline oracle::Rect to_rect(const corand::Tile& t) {
  return {std::vector<int>(t.rows.begin(), t.rows.end()), std::vector<int>(t.cols.begin(), t.cols.end())};
}

inline std::vector<oracle::Rect> registry_rects(const corand::Tiling& t) {
  std::vector<oracle::Rect> out;
  for (const auto& [id, tile] : t.tiles()) out.push_back(to_rect(tile));
  return out;
}

inline corand::PermutationVector to_matrix(const oracle::PermVec& v) {
  const auto n = static_cast<corand::Index>(v.front().size());
  corand::PermutationVector p(n, static_cast<corand::Index>(v.size()));
  for (std::size_t j = 0; j < v.size(); ++j) {
    for (corand::Index i = 0; i < n; ++i) p(i, static_cast<corand::Index>(j)) = v[j][static_cast<std::size_t>(i)];
  }
  return p;
}

inline oracle::PermVec to_vectors(const corand::PermutationVector& p) {
  oracle::PermVec v(static_cast<std::size_t>(p.cols()), oracle::Perm(static_cast<std::size_t>(p.rows())));
  for (corand::Index j = 0; j < p.cols(); ++j) {
    for (corand::Index i = 0; i < p.rows(); ++i) {
      v[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = static_cast<int>(p(i, j));
    }
  }
  return v;
}

inline std::vector<oracle::Rect> random_rects(int count, int n, int m, std::mt19937_64& g) {
  std::vector<oracle::Rect> out;
  for (int k = 0; k < count; ++k) out.push_back({oracle::random_subset(n, g), oracle::random_subset(m, g)});
  return out;
}

}  // namespace fixtures
