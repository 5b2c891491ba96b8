#pragma once

#include <optional>
#include <vector>

#include "corand/dataset.hpp"

namespace corand {

inline constexpr double kDefaultTau = 0.5;
// Threshold used when walking through the socioeconomic example data.
inline constexpr double kExplorationTau = 2.0 / 3.0;

struct AttributeSuggestion {
  // sigma(selection) / sigma(all rows); empty for constant columns.
  std::vector<std::optional<double>> ratios;
  IndexSet included;
  // All attributes by ascending ratio; undefined ratios last.
  std::vector<Index> order;
  double tau = kDefaultTau;
};

AttributeSuggestion suggest_attributes(const Dataset& d, const IndexSet& rows, double tau = kDefaultTau);

}  // namespace corand
