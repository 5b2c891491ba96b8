#pragma once

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "corand/dataset.hpp"
#include "corand/hypothesis.hpp"
#include "corand/rng.hpp"

namespace corand {

enum class GeneratorKind { gaussian, planted, german_layout };

GeneratorKind generator_from_string(const std::string& s);
std::string to_string(GeneratorKind g);

// A categorical attribute kept beside the numeric data; its levels are
// what random tiles take their rows from.
struct Factor {
  std::string name;
  std::vector<std::string> level_names;
  std::vector<int> level;  // per row

  IndexSet rows_with(int lvl) const;
};

struct SyntheticData {
  Dataset data;  // zscored
  std::vector<Factor> factors;
  // Rows of the planted cluster and the attributes on which it is tight.
  IndexSet planted_rows;
  IndexSet planted_cols;
  // Focus rows and column blocks. German layout: rural rows and the vote,
  // demography, workforce and education/income groups. Planted: the
  // cluster plus half of the groups, columns dealt into four blocks.
  IndexSet focus_rows;
  std::vector<IndexSet> focus_partition;
};

// n x m standard normal columns with Type/State/Region factors drawn at random.
SyntheticData make_gaussian(Index n, Index m, std::uint64_t seed);
// Correlated background with one tight cluster on a known attribute subset.
SyntheticData make_planted(Index n, Index m, std::uint64_t seed);
// 32 socioeconomic-style attributes with Type (2), State (16) and Region (4)
// factors; rural districts of the East region form a planted cluster.
SyntheticData make_german_layout(Index n, std::uint64_t seed);

struct ExperimentConfig {
  GeneratorKind generator = GeneratorKind::german_layout;
  Index n = 412;
  Index m = 32;
  std::vector<double> noise{0.0, 1.0, 2.0, 5.0, 10.0};
  std::vector<Index> removals{0, 100, 200};
  std::uint64_t seed = 1;
  Index replicates = 10;
  std::vector<Index> grid_n{500, 1000, 5000, 10000};
  std::vector<Index> grid_m{10, 50, 100, 150, 200};

  void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);
std::uint64_t config_hash(const ExperimentConfig& c);

SyntheticData generate(const ExperimentConfig& c, std::uint64_t seed);

// Rows from one level of a random factor, 2..max_cols random attributes.
Tile random_factor_tile(const SyntheticData& s, Engine& engine, Index max_cols = 32);

struct Table {
  std::string title;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  MatrixXd values;
};

std::string render(const Table& t, int precision = 3);
void write_table_csv(std::ostream& out, const Table& t);

// Mean relative gain loss of the direction found on perturbed data
// (rows removed, Gaussian noise added, rescaled), by noise level (rows)
// and removal count (columns).
Table stability_experiment(const ExperimentConfig& c);

struct TimingResult {
  Table table;  // rows "n x m", columns t_model, t_view (seconds, medians)
  double model_slope = 0.0;  // log-log slope of t_model against n * m
};
TimingResult timing_experiment(const ExperimentConfig& c);

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct NamedPair {
  std::string name;
  HypothesisPair pair;
};

// Gain of each pair's optimal direction under every pair; the optional
// last row is the first principal component of the correlation matrix.
Table gain_table(const Dataset& d, const std::vector<NamedPair>& pairs, bool include_pca = true);

// Exploration, exploration after one tile, focus, focus after one tile.
std::vector<NamedPair> exploration_pairs(const SyntheticData& s);
Table gain_matrix(const ExperimentConfig& c);

struct ToyReport {
  std::vector<std::string> names;
  VectorXd scenario1;  // no knowledge
  VectorXd scenario2;  // A~C and B~D known
  double scenario1_alignment = 0.0;  // |cos| with (C + D) / sqrt(2)
  double scenario2_ab_mass = 0.0;    // (|a| + |b|) / sum |v|
  bool passed = false;
};
ToyReport toy_example(std::uint64_t seed = 1, Index n = 1000);

}  // namespace corand
