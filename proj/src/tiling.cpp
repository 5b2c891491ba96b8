#include "corand/tiling.hpp"

#include <numeric>
#include <sstream>
#include <unordered_map>

namespace corand {

Tile make_tile(IndexSet rows, IndexSet cols) {
  Tile t{normalized(std::move(rows)), normalized(std::move(cols))};
  if (t.rows.empty() || t.cols.empty()) throw Error("tile.empty", "a tile needs at least one row and one column");
  if (t.rows.front() < 0 || t.cols.front() < 0) throw Error("tile.out_of_range", "negative tile index");
  return t;
}

PermutationVector identity_permutation(Index n, Index m) {
  PermutationVector p(n, m);
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < n; ++i) p(i, j) = i;
  }
  return p;
}

bool is_bijection_vector(const PermutationVector& p) {
  const Index n = p.rows();
  std::vector<char> hit(static_cast<std::size_t>(n));
  for (Index j = 0; j < p.cols(); ++j) {
    std::fill(hit.begin(), hit.end(), 0);
    for (Index i = 0; i < n; ++i) {
      const Index v = p(i, j);
      if (v < 0 || v >= n || hit[static_cast<std::size_t>(v)]) return false;
      hit[static_cast<std::size_t>(v)] = 1;
    }
  }
  return true;
}

Tiling::Tiling(Index n, Index m) : ids_(IdMatrix::Zero(n, m)) {
  if (n < 1 || m < 1) throw Error("tiling.invalid", "tiling dimensions must be positive");
}

namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<TileId>& key) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (TileId id : key) {
      h ^= id;
      h *= 0x100000001b3ULL;
    }
    return h;
  }
};

void check_range(const Tile& tile, Index n, Index m) {
  if (tile.rows.empty() || tile.cols.empty()) throw Error("tile.empty", "a tile needs at least one row and one column");
  if (tile.rows.front() < 0 || tile.rows.back() >= n || tile.cols.front() < 0 || tile.cols.back() >= m) {
    throw Error("tile.out_of_range", "tile indices exceed the data dimensions");
  }
}

}  // namespace

void Tiling::merge(const Tile& tile) {
  check_range(tile, rows(), cols());

  // A tile spanning all rows of one existing tile, within its columns, adds
  // no constraint. A strict row subset does: it splits the old tile.
  const TileId first = ids_(tile.rows.front(), tile.cols.front());
  if (first != 0 && tiles_.at(first).rows == tile.rows) {
    bool inside = true;
    for (Index i : tile.rows) {
      for (Index c : tile.cols) inside = inside && ids_(i, c) == first;
      if (!inside) break;
    }
    if (inside) return;
  }

  // Group the tile's rows by the ids they carry across the tile's columns.
  // Rows with different coverage patterns (uncovered cells included) can
  // never be exchanged, so each pattern becomes its own tile.
  struct Group {
    IndexSet rows;
    std::vector<TileId> ids;
  };
  std::unordered_map<std::vector<TileId>, std::size_t, KeyHash> lookup;
  std::vector<Group> groups;
  std::vector<TileId> key(tile.cols.size());
  for (Index i : tile.rows) {
    for (std::size_t k = 0; k < tile.cols.size(); ++k) key[k] = ids_(i, tile.cols[k]);
    auto [it, inserted] = lookup.try_emplace(key, groups.size());
    if (inserted) {
      std::vector<TileId> unique;
      for (TileId id : key) {
        if (id != 0) unique.push_back(id);
      }
      std::sort(unique.begin(), unique.end());
      unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
      groups.push_back({{}, std::move(unique)});
    }
    groups[it->second].rows.push_back(i);
  }

  std::map<TileId, IndexSet> detached;
  for (auto& g : groups) {
    IndexSet cols = tile.cols;
    for (TileId id : g.ids) {
      const auto& other = tiles_.at(id).cols;
      cols.insert(cols.end(), other.begin(), other.end());
    }
    cols = normalized(std::move(cols));

    const TileId fresh = next_id_++;
    for (Index i : g.rows) {
      for (Index c : cols) ids_(i, c) = fresh;
    }
    for (TileId id : g.ids) {
      auto& d = detached[id];
      d.insert(d.end(), g.rows.begin(), g.rows.end());
    }
    tiles_.emplace(fresh, Tile{std::move(g.rows), std::move(cols)});
  }

  for (auto& [id, gone] : detached) {
    std::sort(gone.begin(), gone.end());
    auto& old = tiles_.at(id);
    IndexSet remaining;
    remaining.reserve(old.rows.size());
    std::set_difference(old.rows.begin(), old.rows.end(), gone.begin(), gone.end(), std::back_inserter(remaining));
    if (remaining.empty()) {
      tiles_.erase(id);
    } else {
      old.rows = std::move(remaining);
    }
  }
}

void Tiling::insert_disjoint(TileId id, const Tile& tile) {
  check_range(tile, rows(), cols());
  if (id == 0 || tiles_.count(id)) throw Error("tiling.invalid", "tile id " + std::to_string(id) + " is not free");
  for (Index i : tile.rows) {
    for (Index c : tile.cols) {
      if (ids_(i, c) != 0) throw Error("tiling.overlap", "tiles in a tiling must not overlap");
    }
  }
  for (Index i : tile.rows) {
    for (Index c : tile.cols) ids_(i, c) = id;
  }
  tiles_.emplace(id, tile);
  next_id_ = std::max(next_id_, id + 1);
}

IndexSet Tiling::free_rows(Index col) const {
  IndexSet out;
  for (Index i = 0; i < rows(); ++i) {
    if (ids_(i, col) == 0) out.push_back(i);
  }
  return out;
}

std::string Tiling::audit() const {
  std::map<TileId, std::size_t> cells;
  for (Index i = 0; i < rows(); ++i) {
    for (Index c = 0; c < cols(); ++c) {
      const TileId id = ids_(i, c);
      if (id == 0) continue;
      if (!tiles_.count(id)) return "cell holds unregistered id " + std::to_string(id);
      ++cells[id];
    }
  }
  for (const auto& [id, tile] : tiles_) {
    if (id >= next_id_) return "id " + std::to_string(id) + " not below next_id";
    if (tile.rows.empty() || tile.cols.empty()) return "tile " + std::to_string(id) + " is empty";
    for (Index i : tile.rows) {
      for (Index c : tile.cols) {
        if (ids_(i, c) != id) return "tile " + std::to_string(id) + " is not a rectangle in the id matrix";
      }
    }
    if (cells[id] != tile.rows.size() * tile.cols.size()) {
      return "tile " + std::to_string(id) + " has cells outside its registered rectangle";
    }
  }
  return {};
}

Tiling new_tiling(Index n, Index m) { return Tiling(n, m); }

Tiling merge_tile(Tiling t, const Tile& tile) {
  t.merge(tile);
  return t;
}

Tiling tiling_from_tiles(Index n, Index m, std::span<const Tile> tiles) {
  Tiling t(n, m);
  for (const auto& tile : tiles) t.merge(tile);
  return t;
}

bool is_allowed(const Tiling& t, const PermutationVector& p) {
  if (p.rows() != t.rows() || p.cols() != t.cols()) {
    throw Error("permutation.dimension_mismatch", "permutation vector does not match tiling dimensions");
  }
  for (const auto& [id, tile] : t.tiles()) {
    const Index lead = tile.cols.front();
    for (Index i : tile.rows) {
      const Index target = p(i, lead);
      if (target < 0 || target >= t.rows() || t.id(target, lead) != id) return false;
      for (Index c : tile.cols) {
        if (p(i, c) != target) return false;
      }
    }
  }
  return true;
}

bool is_allowed(std::span<const Tile> tiles, const PermutationVector& p) {
  const Index n = p.rows();
  std::vector<char> member(static_cast<std::size_t>(n));
  for (const auto& tile : tiles) {
    check_range(tile, n, p.cols());
    std::fill(member.begin(), member.end(), 0);
    for (Index i : tile.rows) member[static_cast<std::size_t>(i)] = 1;
    const Index lead = tile.cols.front();
    for (Index i : tile.rows) {
      const Index target = p(i, lead);
      if (target < 0 || target >= n || !member[static_cast<std::size_t>(target)]) return false;
      for (Index c : tile.cols) {
        if (p(i, c) != target) return false;
      }
    }
  }
  return true;
}

void for_each_permutation_vector(Index n, Index m, const std::function<void(const PermutationVector&)>& visit) {
  if (n < 1 || m < 1 || n > 5 || m > 4) {
    throw Error("enumeration.budget", "enumeration limited to n <= 5 and m <= 4");
  }
  std::vector<std::vector<Index>> perms;
  std::vector<Index> base(static_cast<std::size_t>(n));
  std::iota(base.begin(), base.end(), Index{0});
  do {
    perms.push_back(base);
  } while (std::next_permutation(base.begin(), base.end()));

  std::vector<std::size_t> digit(static_cast<std::size_t>(m), 0);
  PermutationVector p(n, m);
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < n; ++i) p(i, j) = perms[0][static_cast<std::size_t>(i)];
  }
  while (true) {
    visit(p);
    Index j = 0;
    for (; j < m; ++j) {
      auto& d = digit[static_cast<std::size_t>(j)];
      d = (d + 1) % perms.size();
      for (Index i = 0; i < n; ++i) p(i, j) = perms[d][static_cast<std::size_t>(i)];
      if (d != 0) break;
    }
    if (j == m) return;
  }
}

bool equivalent_bruteforce(std::span<const Tile> a, std::span<const Tile> b, Index n, Index m) {
  bool same = true;
  for_each_permutation_vector(n, m, [&](const PermutationVector& p) {
    if (same && is_allowed(a, p) != is_allowed(b, p)) same = false;
  });
  return same;
}

}  // namespace corand
