#pragma once

#include <vector>

#include "corand/tiling.hpp"

namespace corand {

// Focus rows plus an ordered partition of the focus columns. The first
// hypothesis keeps every relation inside (rows, union of blocks); the
// second keeps only relations within each block.
struct HypothesisSpec {
  IndexSet rows;
  std::vector<IndexSet> partition;

  IndexSet columns() const;
  void validate(Index n, Index m) const;
};

// All rows, every column its own block: the unguided exploration case.
HypothesisSpec unguided_spec(Index n, Index m);

struct HypothesisTiles {
  std::vector<Tile> first;
  std::vector<Tile> second;
};

HypothesisTiles hypothesis_tilings(const HypothesisSpec& spec);

struct HypothesisPair {
  std::vector<Tile> user_tiles;
  HypothesisSpec spec;
  Tiling resolved_1;
  Tiling resolved_2;
};

// User tiles are merged first, then the hypothesis tiles, on each side.
HypothesisPair assemble(std::vector<Tile> user_tiles, HypothesisSpec spec, Index n, Index m);

}  // namespace corand
