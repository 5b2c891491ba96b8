#pragma once

#include <cstdint>
#include <iterator>
#include <random>
#include <utility>

namespace corand {

using Engine = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed source with reproducible substreams. A substream is a pure function
// of (seed, keys), so callers can draw in any order or in parallel and
// still get identical results.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed = 0) : seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  // Index of the next draw; advances the draw counter.
  std::uint64_t next_draw() noexcept { return draw_++; }
  std::uint64_t draws() const noexcept { return draw_; }

  template <typename... Keys>
  Engine substream(Keys... keys) const {
    std::uint64_t h = splitmix64(seed_);
    ((h = splitmix64(h ^ static_cast<std::uint64_t>(keys))), ...);
    return Engine(h);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t draw_ = 0;
};

// Unbiased integer in [0, bound) by multiply-and-reject.
inline std::uint64_t uniform_below(Engine& engine, std::uint64_t bound) {
  if (bound <= 1) return 0;
  unsigned __int128 product = static_cast<unsigned __int128>(engine()) * bound;
  auto low = static_cast<std::uint64_t>(product);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      product = static_cast<unsigned __int128>(engine()) * bound;
      low = static_cast<std::uint64_t>(product);
    }
  }
  return static_cast<std::uint64_t>(product >> 64);
}

// Decreasing-index swap shuffle; every ordering equally likely.
template <typename RandomIt>
void shuffle(RandomIt first, RandomIt last, Engine& engine) {
  auto count = static_cast<std::uint64_t>(std::distance(first, last));
  for (; count > 1; --count) {
    const auto k = uniform_below(engine, count);
    using std::swap;
    swap(first[static_cast<std::ptrdiff_t>(count - 1)], first[static_cast<std::ptrdiff_t>(k)]);
  }
}

inline double standard_normal(Engine& engine) {
  std::normal_distribution<double> dist(0.0, 1.0);
  return dist(engine);
}

inline double uniform01(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

}  // namespace corand
