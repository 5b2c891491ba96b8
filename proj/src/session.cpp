#include "corand/session.hpp"

#include "corand/covariance.hpp"
#include "corand/sampler.hpp"

namespace corand {

Session::Session(std::shared_ptr<const Dataset> data, std::uint64_t seed, std::string id)
    : data_(std::move(data)), seed_(seed), id_(std::move(id)) {
  if (!data_) throw Error("session.invalid", "session needs a dataset");
  if (data_->cols() < 2) {
    throw Error("session.too_few_columns", "a two-dimensional view needs at least two columns");
  }
  spec_ = unguided_spec(data_->rows(), data_->cols());
}

void Session::invalidate() {
  cache_.reset();
  ++version_;
}

const ViewResult& Session::compute_view() {
  if (cache_) return cache_->view;
  std::vector<Tile> tiles;
  tiles.reserve(tiles_.size());
  for (const auto& t : tiles_) tiles.push_back(t.tile);
  auto pair = assemble(std::move(tiles), spec_, data_->rows(), data_->cols());

  const auto y = center(*data_);
  const MatrixXd sigma1 = analytical_covariance(y, pair.resolved_1);
  const MatrixXd sigma2 = analytical_covariance(y, pair.resolved_2);
  auto view = project(*data_, optimal_directions(sigma1, sigma2, 2));
  ++compute_count_;
  cache_.emplace(Cache{std::move(pair), std::move(view)});
  return cache_->view;
}

const HypothesisPair& Session::cached_pair() const {
  if (!cache_) throw Error("session.no_view", "no view has been computed for the current state");
  return cache_->pair;
}

void Session::commit_tile(IndexSet rows, IndexSet cols, std::string label) {
  Tile tile = make_tile(std::move(rows), std::move(cols));
  if (tile.rows.back() >= data_->rows() || tile.cols.back() >= data_->cols()) {
    throw Error("tile.out_of_range", "tile indices exceed the data dimensions");
  }
  tiles_.push_back({std::move(tile), std::move(label)});
  invalidate();
}

void Session::rollback_last_tile() {
  if (tiles_.empty()) throw Error("session.no_tiles", "no tile to roll back");
  tiles_.pop_back();
  invalidate();
}

void Session::set_hypothesis(HypothesisSpec spec) {
  spec.rows = normalized(std::move(spec.rows));
  for (auto& block : spec.partition) block = normalized(std::move(block));
  spec.validate(data_->rows(), data_->cols());
  spec_ = std::move(spec);
  invalidate();
}

MatrixXd Session::sample_view(int which, std::uint64_t seed) const {
  if (which != 1 && which != 2) throw Error("request.invalid", "sample 'which' must be 1 or 2");
  const auto& pair = cached_pair();
  const Tiling& tiling = which == 1 ? pair.resolved_1 : pair.resolved_2;
  const SeededRng rng(seed);
  const auto p = sample_permutation(tiling, rng, 0);
  return apply(data_->values(), p) * cache_->view.directions;
}

PcpPayload Session::pcp_payload(const IndexSet& rows, double tau) const {
  if (rows.empty()) throw Error("selection.empty", "parallel coordinates need a nonempty selection");
  PcpPayload out;
  out.selected_rows = normalized(rows);
  out.suggestion = suggest_attributes(*data_, out.selected_rows, tau);
  out.column_names = data_->column_names();
  out.values.resize(data_->rows(), data_->cols());
  for (std::size_t k = 0; k < out.suggestion.order.size(); ++k) {
    const Index j = out.suggestion.order[k];
    out.values.col(static_cast<Index>(k)) = data_->values().col(j);
    out.names.push_back(data_->column_names()[static_cast<std::size_t>(j)]);
  }
  return out;
}

void Session::restore(std::vector<LabeledTile> tiles, HypothesisSpec spec, std::uint64_t version) {
  for (const auto& t : tiles) {
    if (t.tile.rows.empty() || t.tile.cols.empty() || t.tile.rows.back() >= data_->rows() ||
        t.tile.cols.back() >= data_->cols()) {
      throw Error("tile.out_of_range", "snapshot tile exceeds the data dimensions");
    }
  }
  spec.validate(data_->rows(), data_->cols());
  tiles_ = std::move(tiles);
  spec_ = std::move(spec);
  cache_.reset();
  version_ = version;
}

}  // namespace corand
