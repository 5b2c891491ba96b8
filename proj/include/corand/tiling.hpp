#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "corand/common.hpp"

namespace corand {

using TileId = std::uint32_t;

// A combinatorial rectangle: the listed rows, permuted by one shared
// bijection across all the listed columns.
struct Tile {
  IndexSet rows;
  IndexSet cols;

  friend bool operator==(const Tile&, const Tile&) = default;
};

// Normalizes the index lists and rejects empty or negative ones.
Tile make_tile(IndexSet rows, IndexSet cols);

// Column j holds the bijection pi_j on [n]; entry (i, j) is pi_j(i).
using PermutationVector = Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic>;

PermutationVector identity_permutation(Index n, Index m);
bool is_bijection_vector(const PermutationVector& p);

// A set of non-overlapping tiles, stored both as an n x m matrix of tile
// ids (0 marks an uncovered cell) and as a registry from id to tile.
class Tiling {
 public:
  using IdMatrix = Eigen::Matrix<TileId, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  Tiling(Index n, Index m);

  Index rows() const noexcept { return ids_.rows(); }
  Index cols() const noexcept { return ids_.cols(); }
  const IdMatrix& ids() const noexcept { return ids_; }
  TileId id(Index row, Index col) const { return ids_(row, col); }
  const std::map<TileId, Tile>& tiles() const noexcept { return tiles_; }
  TileId next_id() const noexcept { return next_id_; }

  // Merges a possibly overlapping tile so that the result allows exactly
  // the permutation vectors allowed by both the old tiling and the tile.
  void merge(const Tile& tile);

  // Inserts a tile that must not overlap any existing tile. Used when
  // restoring a serialized tiling.
  void insert_disjoint(TileId id, const Tile& tile);

  // Rows of `col` not covered by any tile, ascending.
  IndexSet free_rows(Index col) const;

  // Empty when id matrix and registry agree and every tile is a rectangle;
  // otherwise a description of the first violation.
  std::string audit() const;

 private:
  IdMatrix ids_;
  std::map<TileId, Tile> tiles_;
  TileId next_id_ = 1;
};

Tiling new_tiling(Index n, Index m);
Tiling merge_tile(Tiling t, const Tile& tile);
Tiling tiling_from_tiles(Index n, Index m, std::span<const Tile> tiles);

bool is_allowed(const Tiling& t, const PermutationVector& p);
// Checks every tile of a possibly overlapping tile set independently.
bool is_allowed(std::span<const Tile> tiles, const PermutationVector& p);

// Visits all (n!)^m permutation vectors. Throws when the count exceeds
// the enumeration budget (n <= 5, m <= 4).
void for_each_permutation_vector(Index n, Index m, const std::function<void(const PermutationVector&)>& visit);

bool equivalent_bruteforce(std::span<const Tile> a, std::span<const Tile> b, Index n, Index m);

}  // namespace corand
