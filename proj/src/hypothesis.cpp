#include "corand/hypothesis.hpp"

namespace corand {

IndexSet HypothesisSpec::columns() const {
  IndexSet all;
  for (const auto& block : partition) all.insert(all.end(), block.begin(), block.end());
  return normalized(std::move(all));
}

void HypothesisSpec::validate(Index n, Index m) const {
  if (rows.empty()) throw Error("hypothesis.invalid", "hypothesis needs at least one row");
  if (partition.empty()) throw Error("hypothesis.invalid", "hypothesis needs at least one column block");
  for (Index r : rows) {
    if (r < 0 || r >= n) throw Error("hypothesis.out_of_range", "hypothesis row out of range");
  }
  std::vector<char> used(static_cast<std::size_t>(m), 0);
  for (const auto& block : partition) {
    if (block.empty()) throw Error("hypothesis.invalid", "partition blocks must be nonempty");
    for (Index c : block) {
      if (c < 0 || c >= m) throw Error("hypothesis.out_of_range", "hypothesis column out of range");
      if (used[static_cast<std::size_t>(c)]) {
        throw Error("hypothesis.invalid", "partition blocks must be disjoint (column " + std::to_string(c) + ")");
      }
      used[static_cast<std::size_t>(c)] = 1;
    }
  }
}

HypothesisSpec unguided_spec(Index n, Index m) {
  HypothesisSpec spec;
  spec.rows = iota_set(n);
  for (Index j = 0; j < m; ++j) spec.partition.push_back({j});
  return spec;
}

HypothesisTiles hypothesis_tilings(const HypothesisSpec& spec) {
  HypothesisTiles out;
  out.first.push_back(make_tile(spec.rows, spec.columns()));
  for (const auto& block : spec.partition) out.second.push_back(make_tile(spec.rows, block));
  return out;
}

HypothesisPair assemble(std::vector<Tile> user_tiles, HypothesisSpec spec, Index n, Index m) {
  spec.rows = normalized(std::move(spec.rows));
  for (auto& block : spec.partition) block = normalized(std::move(block));
  spec.validate(n, m);

  Tiling base(n, m);
  for (const auto& tile : user_tiles) base.merge(tile);

  const auto tiles = hypothesis_tilings(spec);
  Tiling first = base;
  for (const auto& tile : tiles.first) first.merge(tile);
  Tiling second = std::move(base);
  for (const auto& tile : tiles.second) second.merge(tile);

  return HypothesisPair{std::move(user_tiles), std::move(spec), std::move(first), std::move(second)};
}

}  // namespace corand
