#include "corand/selection.hpp"

#include <cmath>
#include <numeric>

namespace corand {

namespace {

double population_sd(const MatrixXd& values, Index col, const IndexSet* rows) {
  double sum = 0.0;
  std::size_t count = 0;
  auto visit = [&](auto&& fn) {
    if (rows) {
      for (Index i : *rows) fn(values(i, col));
    } else {
      for (Index i = 0; i < values.rows(); ++i) fn(values(i, col));
    }
  };
  visit([&](double x) {
    sum += x;
    ++count;
  });
  const double mean = sum / static_cast<double>(count);
  double ss = 0.0;
  visit([&](double x) { ss += (x - mean) * (x - mean); });
  return std::sqrt(ss / static_cast<double>(count));
}

}  // namespace

AttributeSuggestion suggest_attributes(const Dataset& d, const IndexSet& rows_in, double tau) {
  const IndexSet rows = normalized(rows_in);
  if (rows.size() < 2) throw Error("selection.too_few_rows", "attribute suggestion needs at least two rows");
  if (!(tau > 0.0)) throw Error("selection.invalid_tau", "tau must be positive");
  if (rows.front() < 0 || rows.back() >= d.rows()) throw Error("selection.out_of_range", "selected row out of range");

  AttributeSuggestion out;
  out.tau = tau;
  const auto& x = d.values();
  for (Index j = 0; j < d.cols(); ++j) {
    const double all = population_sd(x, j, nullptr);
    const double scale = std::max(1.0, x.col(j).cwiseAbs().maxCoeff());
    if (all <= 1e-12 * scale) {
      out.ratios.emplace_back();
      continue;
    }
    const double ratio = population_sd(x, j, &rows) / all;
    out.ratios.emplace_back(ratio);
    if (ratio < tau) out.included.push_back(j);
  }

  out.order.resize(static_cast<std::size_t>(d.cols()));
  std::iota(out.order.begin(), out.order.end(), Index{0});
  std::stable_sort(out.order.begin(), out.order.end(), [&](Index a, Index b) {
    const auto& ra = out.ratios[static_cast<std::size_t>(a)];
    const auto& rb = out.ratios[static_cast<std::size_t>(b)];
    if (!ra || !rb) return ra.has_value() && !rb.has_value();
    return *ra < *rb;
  });
  return out;
}

}  // namespace corand
