#include "corand/projection.hpp"

namespace corand {

std::vector<std::string> top_weight_labels(const VectorXd& direction, const std::vector<std::string>& names,
                                           Index count) {
  std::vector<Index> idx(static_cast<std::size_t>(direction.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Index a, Index b) { return std::abs(direction(a)) > std::abs(direction(b)); });
  std::vector<std::string> out;
  for (Index k = 0; k < std::min<Index>(count, direction.size()); ++k) {
    out.push_back(names[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])]);
  }
  return out;
}

ViewResult project(const Dataset& d, const Directions<double>& dirs, Index label_count) {
  if (dirs.vectors.rows() != d.cols()) {
    throw Error("projection.dimension_mismatch", "direction length does not match the dataset");
  }
  ViewResult view;
  view.directions = dirs.vectors;
  view.gains = dirs.gains;
  view.coords = d.values() * dirs.vectors;
  for (Index k = 0; k < dirs.vectors.cols(); ++k) {
    view.axis_labels.push_back(top_weight_labels(dirs.vectors.col(k), d.column_names(), label_count));
  }
  return view;
}

}  // namespace corand
