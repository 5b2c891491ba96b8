#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "corand/dataset.hpp"
#include "corand/hypothesis.hpp"
#include "corand/projection.hpp"
#include "corand/selection.hpp"

namespace corand {

struct LabeledTile {
  Tile tile;
  std::string label;
};

struct PcpPayload {
  AttributeSuggestion suggestion;
  // Dataset values with columns in suggestion.order.
  MatrixXd values;
  // Axis names in display order.
  std::vector<std::string> names;
  std::vector<std::string> column_names;
  IndexSet selected_rows;
};

// One exploration loop: the analyst's tiles, the current hypothesis and
// the view they induce. Mutations bump `version` and drop the cached view.
// Not internally synchronized; callers serialize writers.
class Session {
 public:
  Session(std::shared_ptr<const Dataset> data, std::uint64_t seed, std::string id = {});

  const std::string& id() const noexcept { return id_; }
  const Dataset& dataset() const noexcept { return *data_; }
  std::shared_ptr<const Dataset> dataset_ptr() const noexcept { return data_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t version() const noexcept { return version_; }
  std::uint64_t compute_count() const noexcept { return compute_count_; }
  const std::vector<LabeledTile>& user_tiles() const noexcept { return tiles_; }
  const HypothesisSpec& spec() const noexcept { return spec_; }
  bool has_cached_view() const noexcept { return cache_.has_value(); }

  const ViewResult& compute_view();
  const HypothesisPair& cached_pair() const;

  void commit_tile(IndexSet rows, IndexSet cols, std::string label = {});
  void rollback_last_tile();
  void set_hypothesis(HypothesisSpec spec);

  // Data drawn from the first (which = 1) or second (which = 2) hypothesis
  // distribution, projected on the cached directions.
  MatrixXd sample_view(int which, std::uint64_t seed) const;

  PcpPayload pcp_payload(const IndexSet& rows, double tau = kDefaultTau) const;

  // Restores tiles, hypothesis and version recorded by a snapshot.
  void restore(std::vector<LabeledTile> tiles, HypothesisSpec spec, std::uint64_t version);

 private:
  struct Cache {
    HypothesisPair pair;
    ViewResult view;
  };

  void invalidate();

  std::shared_ptr<const Dataset> data_;
  std::uint64_t seed_;
  std::string id_;
  std::vector<LabeledTile> tiles_;
  HypothesisSpec spec_;
  std::optional<Cache> cache_;
  std::uint64_t version_ = 0;
  std::uint64_t compute_count_ = 0;
};

}  // namespace corand
