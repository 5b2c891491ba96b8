#include "corand/sampler.hpp"

namespace corand {

namespace {
constexpr std::uint64_t kTileStream = 0;
constexpr std::uint64_t kFreeStream = 1;
}  // namespace

PermutationVector sample_permutation(const Tiling& t, const SeededRng& rng, std::uint64_t draw) {
  const Index n = t.rows();
  const Index m = t.cols();
  PermutationVector p(n, m);

  IndexSet image;
  for (const auto& [id, tile] : t.tiles()) {
    image = tile.rows;
    auto engine = rng.substream(draw, kTileStream, id);
    shuffle(image.begin(), image.end(), engine);
    for (Index c : tile.cols) {
      for (std::size_t k = 0; k < tile.rows.size(); ++k) p(tile.rows[k], c) = image[k];
    }
  }

  for (Index c = 0; c < m; ++c) {
    const IndexSet free = t.free_rows(c);
    if (free.empty()) continue;
    image = free;
    auto engine = rng.substream(draw, kFreeStream, static_cast<std::uint64_t>(c));
    shuffle(image.begin(), image.end(), engine);
    for (std::size_t k = 0; k < free.size(); ++k) p(free[k], c) = image[k];
  }
  return p;
}

PermutationVector sample_permutation(const Tiling& t, SeededRng& rng) {
  const auto draw = rng.next_draw();
  return sample_permutation(t, static_cast<const SeededRng&>(rng), draw);
}

Dataset apply(const Dataset& d, const PermutationVector& p) {
  return Dataset(apply(d.values(), p), d.column_names(), d.column_groups(), d.scaling_state());
}

}  // namespace corand
