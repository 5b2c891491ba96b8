#include "corand/io.hpp"

#include <fstream>

namespace corand::io {

namespace {

IndexSet indices_from_json(const json& j, const Dataset* d, bool columns) {
  if (!j.is_array()) throw Error("request.invalid", "expected an array of indices");
  IndexSet out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (v.is_number_integer()) {
      out.push_back(v.get<Index>());
    } else if (v.is_string() && columns && d) {
      out.push_back(d->column_index(v.get<std::string>()));
    } else {
      throw Error("request.invalid", "indices must be integers" + std::string(columns ? " or column names" : ""));
    }
  }
  return out;
}

}  // namespace

json to_json(const Tile& tile) { return json{{"rows", tile.rows}, {"cols", tile.cols}}; }

Tile tile_from_json(const json& j, const Dataset* d) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols")) {
    throw Error("request.invalid", "a tile needs 'rows' and 'cols'");
  }
  return make_tile(indices_from_json(j.at("rows"), d, false), indices_from_json(j.at("cols"), d, true));
}

json to_json(const Tiling& t) {
  json tiles = json::array();
  for (const auto& [id, tile] : t.tiles()) tiles.push_back({{"id", id}, {"rows", tile.rows}, {"cols", tile.cols}});
  return json{{"n", t.rows()}, {"m", t.cols()}, {"tiles", tiles}};
}

Tiling tiling_from_json(const json& j) {
  try {
    Tiling t(j.at("n").get<Index>(), j.at("m").get<Index>());
    for (const auto& tj : j.at("tiles")) {
      t.insert_disjoint(tj.at("id").get<TileId>(), make_tile(tj.at("rows").get<IndexSet>(), tj.at("cols").get<IndexSet>()));
    }
    return t;
  } catch (const json::exception& e) {
    throw Error("tiling.invalid", std::string("malformed tiling JSON: ") + e.what());
  }
}

std::vector<Tile> tiles_from_json(const json& j, const Dataset* d) {
  if (j.is_object() && !j.contains("tiles")) throw Error("request.invalid", "expected 'tiles' or an array of tiles");
  const json& arr = j.is_object() ? j.at("tiles") : j;
  if (!arr.is_array()) throw Error("request.invalid", "expected an array of tiles");
  std::vector<Tile> out;
  for (const auto& tj : arr) out.push_back(tile_from_json(tj, d));
  return out;
}

json to_json(const HypothesisSpec& spec) { return json{{"rows", spec.rows}, {"partition", spec.partition}}; }

HypothesisSpec spec_from_json(const json& j, Index n, Index m, const Dataset* d) {
  if (!j.is_object()) throw Error("request.invalid", "hypothesis must be a JSON object");
  HypothesisSpec spec;
  if (j.contains("rows") && !j.at("rows").is_null()) {
    spec.rows = normalized(indices_from_json(j.at("rows"), d, false));
  } else {
    spec.rows = iota_set(n);
  }
  if (j.contains("partition") && !j.at("partition").is_null()) {
    if (!j.at("partition").is_array()) throw Error("request.invalid", "partition must be an array of column lists");
    for (const auto& block : j.at("partition")) spec.partition.push_back(normalized(indices_from_json(block, d, true)));
  } else {
    for (Index c = 0; c < m; ++c) spec.partition.push_back({c});
  }
  spec.validate(n, m);
  return spec;
}

HypothesisFile hypothesis_file_from_json(const json& j, const Dataset& d) {
  HypothesisFile f;
  f.spec = spec_from_json(j, d.rows(), d.cols(), &d);
  if (j.contains("user_tiles")) f.user_tiles = tiles_from_json(j.at("user_tiles"), &d);
  return f;
}

json to_json(const ViewResult& view, bool with_coords) {
  json dirs = json::array();
  for (Index k = 0; k < view.directions.cols(); ++k) {
    const VectorXd col = view.directions.col(k);
    dirs.push_back(std::vector<double>(col.data(), col.data() + col.size()));
  }
  json out{{"directions", dirs},
           {"gains", std::vector<double>(view.gains.data(), view.gains.data() + view.gains.size())},
           {"axis_labels", view.axis_labels}};
  if (with_coords) {
    json coords = json::array();
    for (Index i = 0; i < view.coords.rows(); ++i) coords.push_back({view.coords(i, 0), view.coords(i, 1)});
    out["coords"] = std::move(coords);
  }
  return out;
}

json to_json(const AttributeSuggestion& s, const std::vector<std::string>& names) {
  json attrs = json::array();
  for (Index j : s.order) {
    const auto& r = s.ratios[static_cast<std::size_t>(j)];
    const bool included = std::binary_search(s.included.begin(), s.included.end(), j);
    attrs.push_back({{"index", j},
                     {"name", names[static_cast<std::size_t>(j)]},
                     {"ratio", r ? json(*r) : json(nullptr)},
                     {"included", included}});
  }
  return json{{"tau", s.tau}, {"included", s.included}, {"attributes", attrs}};
}

json to_json(const PcpPayload& p) {
  json values = json::array();
  for (Index i = 0; i < p.values.rows(); ++i) {
    const VectorXd row = p.values.row(i).transpose();
    values.push_back(std::vector<double>(row.data(), row.data() + row.size()));
  }
  return json{{"suggestion", to_json(p.suggestion, p.column_names)},
              {"axes", p.names},
              {"selected_rows", p.selected_rows},
              {"values", values}};
}

json snapshot(const Session& s, const std::string& dataset_ref) {
  json tiles = json::array();
  for (const auto& t : s.user_tiles()) tiles.push_back({{"rows", t.tile.rows}, {"cols", t.tile.cols}, {"label", t.label}});
  return json{{"id", s.id()},
              {"dataset", dataset_ref},
              {"seed", s.seed()},
              {"version", s.version()},
              {"user_tiles", tiles},
              {"hypothesis", to_json(s.spec())}};
}

Session restore_session(const json& j, std::shared_ptr<const Dataset> data) {
  try {
    Session s(data, j.at("seed").get<std::uint64_t>(), j.value("id", std::string{}));
    std::vector<LabeledTile> tiles;
    for (const auto& tj : j.at("user_tiles")) {
      tiles.push_back({make_tile(tj.at("rows").get<IndexSet>(), tj.at("cols").get<IndexSet>()), tj.value("label", std::string{})});
    }
    auto spec = spec_from_json(j.at("hypothesis"), data->rows(), data->cols(), data.get());
    s.restore(std::move(tiles), std::move(spec), j.value("version", std::uint64_t{0}));
    return s;
  } catch (const json::exception& e) {
    throw Error("request.invalid", std::string("malformed session snapshot: ") + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io.open_failed", "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error("json.invalid", "'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("io.open_failed", "cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace corand::io
