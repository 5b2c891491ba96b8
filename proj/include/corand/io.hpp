#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "corand/dataset.hpp"
#include "corand/hypothesis.hpp"
#include "corand/projection.hpp"
#include "corand/selection.hpp"
#include "corand/session.hpp"
#include "corand/tiling.hpp"

// JSON wire formats. Indices are zero-based. Wherever a column list is
// read and a dataset is at hand, column names are accepted in place of
// indices.
namespace corand::io {

using nlohmann::json;

json to_json(const Tile& tile);
Tile tile_from_json(const json& j, const Dataset* d = nullptr);

// {n, m, tiles: [{id, rows, cols}]}; the id matrix is rebuilt on load.
json to_json(const Tiling& t);
Tiling tiling_from_json(const json& j);

// Accepts a bare array of tiles, or an object with a "tiles" array.
std::vector<Tile> tiles_from_json(const json& j, const Dataset* d = nullptr);

json to_json(const HypothesisSpec& spec);
// Missing "rows" selects all n rows; missing "partition" puts every column
// in its own block.
HypothesisSpec spec_from_json(const json& j, Index n, Index m, const Dataset* d = nullptr);

// Hypothesis file: {rows, partition, user_tiles}.
struct HypothesisFile {
  HypothesisSpec spec;
  std::vector<Tile> user_tiles;
};
HypothesisFile hypothesis_file_from_json(const json& j, const Dataset& d);

json to_json(const ViewResult& view, bool with_coords = true);
json to_json(const AttributeSuggestion& s, const std::vector<std::string>& names);
json to_json(const PcpPayload& p);

json snapshot(const Session& s, const std::string& dataset_ref);
// Rebuilds a session from a snapshot over an already loaded dataset.
Session restore_session(const json& j, std::shared_ptr<const Dataset> data);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace corand::io
