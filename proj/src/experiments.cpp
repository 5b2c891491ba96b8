#include "corand/experiments.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <future>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>

#include "corand/covariance.hpp"
#include "corand/projection.hpp"
#include "corand/selection.hpp"

namespace corand {

using nlohmann::json;

GeneratorKind generator_from_string(const std::string& s) {
  if (s == "gaussian") return GeneratorKind::gaussian;
  if (s == "planted" || s == "planted-structure") return GeneratorKind::planted;
  if (s == "german-layout" || s == "german-layout-synthetic") return GeneratorKind::german_layout;
  throw Error("config.invalid", "unknown generator '" + s + "'");
}

std::string to_string(GeneratorKind g) {
  switch (g) {
    case GeneratorKind::gaussian: return "gaussian";
    case GeneratorKind::planted: return "planted-structure";
    case GeneratorKind::german_layout: return "german-layout-synthetic";
  }
  return "gaussian";
}

IndexSet Factor::rows_with(int lvl) const {
  IndexSet out;
  for (std::size_t i = 0; i < level.size(); ++i) {
    if (level[i] == lvl) out.push_back(static_cast<Index>(i));
  }
  return out;
}

namespace {

constexpr std::uint64_t kStructureSeed = 0x5eedf00dULL;

Factor random_factor(const std::string& name, int levels, Index n, Engine& engine) {
  Factor f{name, {}, std::vector<int>(static_cast<std::size_t>(n))};
  for (int l = 0; l < levels; ++l) f.level_names.push_back(name + "." + std::to_string(l + 1));
  for (auto& v : f.level) v = static_cast<int>(uniform_below(engine, static_cast<std::uint64_t>(levels)));
  return f;
}

std::vector<std::string> numbered_names(Index m) {
  std::vector<std::string> names;
  for (Index j = 0; j < m; ++j) names.push_back("X" + std::to_string(j + 1));
  return names;
}

IndexSet random_subset(Index universe, Index count, Engine& engine) {
  IndexSet all = iota_set(universe);
  shuffle(all.begin(), all.end(), engine);
  all.resize(static_cast<std::size_t>(count));
  return normalized(std::move(all));
}

}  // namespace

SyntheticData make_gaussian(Index n, Index m, std::uint64_t seed) {
  const SeededRng rng(seed);
  auto engine = rng.substream(0);
  MatrixXd x(n, m);
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < n; ++i) x(i, j) = standard_normal(engine);
  }
  auto factor_engine = rng.substream(1);
  SyntheticData s{zscore(Dataset(std::move(x), numbered_names(m))), {}, {}, {}, {}, {}};
  s.factors.push_back(random_factor("Type", 2, n, factor_engine));
  s.factors.push_back(random_factor("State", 16, n, factor_engine));
  s.factors.push_back(random_factor("Region", 4, n, factor_engine));
  return s;
}

SyntheticData make_planted(Index n, Index m, std::uint64_t seed) {
  if (m < 2 || n < 16) throw Error("config.invalid", "planted generator needs n >= 16 and m >= 2");
  const SeededRng rng(seed);
  auto engine = rng.substream(0);
  const Index latent = 2;
  MatrixXd loadings(latent, m);
  for (Index k = 0; k < latent; ++k) {
    for (Index j = 0; j < m; ++j) loadings(k, j) = standard_normal(engine);
  }
  MatrixXd z(n, latent);
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < latent; ++k) z(i, k) = standard_normal(engine);
  }
  MatrixXd x = z * loadings;
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < n; ++i) x(i, j) += standard_normal(engine);
  }

  SyntheticData s{Dataset(MatrixXd::Zero(2, 1), {"tmp"}), {}, {}, {}, {}, {}};
  s.planted_rows = random_subset(n, std::max<Index>(4, n / 8), engine);
  s.planted_cols = random_subset(m, std::max<Index>(2, m / 4), engine);
  for (Index c : s.planted_cols) {
    const double sd = std::sqrt((x.col(c).array() - x.col(c).mean()).square().mean());
    for (Index i : s.planted_rows) x(i, c) = sd * (3.0 + 0.1 * standard_normal(engine));
  }
  s.data = zscore(Dataset(std::move(x), numbered_names(m)));

  Factor cluster{"Cluster", {"Cluster.out", "Cluster.in"}, std::vector<int>(static_cast<std::size_t>(n), 0)};
  for (Index i : s.planted_rows) cluster.level[static_cast<std::size_t>(i)] = 1;
  s.factors.push_back(std::move(cluster));
  s.factors.push_back(random_factor("Group", 4, n, engine));

  // Focus: the cluster plus half of the groups, columns in up to four blocks.
  const auto& group = s.factors.back();
  for (Index i = 0; i < n; ++i) {
    if (group.level[static_cast<std::size_t>(i)] < 2 || std::binary_search(s.planted_rows.begin(), s.planted_rows.end(), i)) {
      s.focus_rows.push_back(i);
    }
  }
  IndexSet cols = iota_set(m);
  shuffle(cols.begin(), cols.end(), engine);
  const Index blocks = std::min<Index>(4, m);
  s.focus_partition.resize(static_cast<std::size_t>(blocks));
  for (Index k = 0; k < m; ++k) s.focus_partition[static_cast<std::size_t>(k % blocks)].push_back(cols[static_cast<std::size_t>(k)]);
  for (auto& b : s.focus_partition) b = normalized(std::move(b));
  return s;
}

namespace {

struct AttributeSpec {
  const char* name;
  int group;  // 0..3 focus groups, -1 other
  double urban;
  double east;
  double planted;  // cluster centre for East rural rows; 0 = not planted
};

// Loadings on the urban and East indicators; the remaining structure comes
// from three shared latent factors with loadings drawn from a fixed stream.
constexpr AttributeSpec kGermanAttributes[] = {
    {"LEFT.2009", 0, 0.2, 1.6, 2.4},
    {"CDU.2009", 0, -0.6, -0.5, 0.0},
    {"SPD.2009", 0, 0.4, -0.3, 0.0},
    {"FDP.2009", 0, 0.3, -0.6, 0.0},
    {"GREEN.2009", 0, 1.2, -0.7, -1.6},
    {"Elderly.pop.", 1, -0.2, 0.8, 1.5},
    {"Old.Pop.", 1, -0.3, 0.6, 0.0},
    {"Mid.aged.Pop.", 1, 0.3, 0.2, 0.0},
    {"Young.Pop.", 1, 0.9, -0.4, 0.0},
    {"Children.Pop.", 1, -0.5, -1.0, -1.7},
    {"Agricult..workf.", 2, -1.4, 0.5, 1.4},
    {"Prod..workf.", 2, -0.5, 0.3, 0.0},
    {"Manufac..Workf.", 2, -0.4, -0.4, 0.0},
    {"Constr..workf.", 2, -0.8, 0.9, 0.0},
    {"Service.workf.", 2, 1.5, 0.1, 0.0},
    {"Trade.workf.", 2, 0.4, 0.0, 0.0},
    {"Finance.workf.", 2, 1.1, -0.5, 0.0},
    {"Pub..serv..workf.", 2, 0.9, 0.4, 0.0},
    {"Highschool.degree", 3, 1.3, 0.2, 0.0},
    {"No.school.degree", 3, -0.2, 0.7, 0.0},
    {"Unemploy.", 3, 0.5, 1.4, 1.9},
    {"Unempl..Youth", 3, 0.3, 1.1, 0.0},
    {"Income", 3, 0.6, -1.3, -1.7},
    {"Voter.turnout", -1, 0.1, -0.9, 0.0},
    {"Pop.density", -1, 1.8, -0.2, 0.0},
    {"GDP.growth", -1, 0.9, -0.3, 0.0},
    {"GDP.per.capita", -1, 1.4, -0.8, 0.0},
    {"Foreigners", -1, 1.2, -1.2, -1.3},
    {"Birth.rate", -1, 0.2, -0.5, 0.0},
    {"Death.rate", -1, -0.4, 0.8, 0.0},
    {"Migration", -1, 0.5, -0.9, -1.4},
    {"Area", -1, -1.1, 0.3, 0.0},
};

}  // namespace

SyntheticData make_german_layout(Index n, std::uint64_t seed) {
  if (n < 40) throw Error("config.invalid", "german-layout generator needs n >= 40");
  constexpr Index m = std::size(kGermanAttributes);
  constexpr Index latent = 3;

  auto structure = SeededRng(kStructureSeed).substream(0);
  MatrixXd loadings(latent, m);
  for (Index k = 0; k < latent; ++k) {
    for (Index j = 0; j < m; ++j) loadings(k, j) = 0.6 * standard_normal(structure);
  }

  const SeededRng rng(seed);
  auto engine = rng.substream(0);
  Factor type{"Type", {"Type.urban", "Type.rural"}, std::vector<int>(static_cast<std::size_t>(n))};
  Factor state{"State", {}, std::vector<int>(static_cast<std::size_t>(n))};
  Factor region{"Region", {"Region.North", "Region.South", "Region.West", "Region.East"},
                std::vector<int>(static_cast<std::size_t>(n))};
  for (int l = 0; l < 16; ++l) state.level_names.push_back("State." + std::to_string(l + 1));

  constexpr double region_cdf[] = {0.2, 0.5, 0.8, 1.0};
  for (Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    type.level[k] = uniform01(engine) < 0.28 ? 0 : 1;
    const double u = uniform01(engine);
    int r = 0;
    while (u >= region_cdf[r]) ++r;
    region.level[k] = r;
    state.level[k] = 4 * r + static_cast<int>(uniform_below(engine, 4));
  }

  MatrixXd x(n, m);
  for (Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double urban = type.level[k] == 0 ? 1.0 : 0.0;
    const double east = region.level[k] == 3 ? 1.0 : 0.0;
    Vector<double> z(latent);
    for (Index l = 0; l < latent; ++l) z(l) = standard_normal(engine);
    for (Index j = 0; j < m; ++j) {
      const auto& a = kGermanAttributes[j];
      x(i, j) = a.urban * urban + a.east * east + loadings.col(j).dot(z) + 0.5 * standard_normal(engine);
    }
  }

  SyntheticData s{Dataset(MatrixXd::Zero(2, 1), {"tmp"}), {}, {}, {}, {}, {}};
  for (Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (type.level[k] == 1) s.focus_rows.push_back(i);
    if (type.level[k] == 1 && region.level[k] == 3) s.planted_rows.push_back(i);
  }
  s.focus_partition.resize(4);
  std::vector<std::string> names;
  for (Index j = 0; j < m; ++j) {
    const auto& a = kGermanAttributes[j];
    names.emplace_back(a.name);
    if (a.group >= 0) s.focus_partition[static_cast<std::size_t>(a.group)].push_back(j);
    if (a.planted != 0.0) {
      s.planted_cols.push_back(j);
      for (Index i : s.planted_rows) x(i, j) = a.planted + 0.15 * standard_normal(engine);
    }
  }
  s.data = zscore(Dataset(std::move(x), std::move(names)));
  s.factors = {std::move(type), std::move(state), std::move(region)};
  return s;
}

// ---------------------------------------------------------------------------
// Configuration

void ExperimentConfig::validate() const {
  if (noise.empty() || removals.empty() || grid_n.empty() || grid_m.empty()) {
    throw Error("config.invalid", "experiment lists must be nonempty");
  }
  if (replicates < 1) throw Error("config.invalid", "replicate count must be at least 1");
  if (n < 2 || m < 2) throw Error("config.invalid", "experiment data needs n >= 2 and m >= 2");
  for (double s : noise) {
    if (!(s >= 0.0)) throw Error("config.invalid", "noise levels must be nonnegative");
  }
  for (Index r : removals) {
    if (r < 0) throw Error("config.invalid", "row removals must be nonnegative");
  }
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  try {
    if (j.contains("generator")) c.generator = generator_from_string(j.at("generator").get<std::string>());
    c.n = j.value("n", c.n);
    c.m = j.value("m", c.m);
    c.noise = j.value("noise", c.noise);
    c.removals = j.value("removals", c.removals);
    c.seed = j.value("seed", c.seed);
    c.replicates = j.value("replicates", c.replicates);
    c.grid_n = j.value("grid_n", c.grid_n);
    c.grid_m = j.value("grid_m", c.grid_m);
  } catch (const json::exception& e) {
    throw Error("config.invalid", std::string("malformed experiment config: ") + e.what());
  }
  c.validate();
  return c;
}

json to_json(const ExperimentConfig& c) {
  return json{{"generator", to_string(c.generator)},
              {"n", c.n},
              {"m", c.m},
              {"noise", c.noise},
              {"removals", c.removals},
              {"seed", c.seed},
              {"replicates", c.replicates},
              {"grid_n", c.grid_n},
              {"grid_m", c.grid_m}};
}

std::uint64_t config_hash(const ExperimentConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_json(c).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

SyntheticData generate(const ExperimentConfig& c, std::uint64_t seed) {
  switch (c.generator) {
    case GeneratorKind::gaussian: return make_gaussian(c.n, c.m, seed);
    case GeneratorKind::planted: return make_planted(c.n, c.m, seed);
    case GeneratorKind::german_layout: return make_german_layout(c.n, seed);
  }
  return make_gaussian(c.n, c.m, seed);
}

Tile random_factor_tile(const SyntheticData& s, Engine& engine, Index max_cols) {
  if (s.factors.empty()) throw Error("config.invalid", "generator provides no factors for random tiles");
  const auto& f = s.factors[uniform_below(engine, s.factors.size())];
  std::vector<int> present;
  for (int l = 0; l < static_cast<int>(f.level_names.size()); ++l) {
    if (!f.rows_with(l).empty()) present.push_back(l);
  }
  const int lvl = present[uniform_below(engine, present.size())];
  const Index m = s.data.cols();
  const Index hi = std::min(max_cols, m);
  const Index count = 2 + static_cast<Index>(uniform_below(engine, static_cast<std::uint64_t>(hi - 1)));
  return make_tile(f.rows_with(lvl), random_subset(m, count, engine));
}

// ---------------------------------------------------------------------------
// Tables

std::string render(const Table& t, int precision) {
  std::size_t label_width = 0;
  for (const auto& r : t.row_labels) label_width = std::max(label_width, r.size());
  std::size_t cell = static_cast<std::size_t>(precision) + 8;
  for (const auto& c : t.col_labels) cell = std::max(cell, c.size() + 2);

  std::ostringstream out;
  if (!t.title.empty()) out << t.title << '\n';
  out << std::string(label_width, ' ');
  for (const auto& c : t.col_labels) out << std::setw(static_cast<int>(cell)) << c;
  out << '\n' << std::fixed << std::setprecision(precision);
  for (Index i = 0; i < t.values.rows(); ++i) {
    out << std::left << std::setw(static_cast<int>(label_width)) << t.row_labels[static_cast<std::size_t>(i)]
        << std::right;
    for (Index j = 0; j < t.values.cols(); ++j) out << std::setw(static_cast<int>(cell)) << t.values(i, j);
    out << '\n';
  }
  return out.str();
}

void write_table_csv(std::ostream& out, const Table& t) {
  out << "row";
  for (const auto& c : t.col_labels) out << ',' << c;
  out << '\n';
  const auto old = out.precision(17);
  for (Index i = 0; i < t.values.rows(); ++i) {
    out << t.row_labels[static_cast<std::size_t>(i)];
    for (Index j = 0; j < t.values.cols(); ++j) out << ',' << t.values(i, j);
    out << '\n';
  }
  out.precision(old);
}

// ---------------------------------------------------------------------------
// Stability

namespace {

struct Contrast {
  MatrixXd sigma1;
  MatrixXd sigma2;  // regularized
  VectorXd top;
};

Contrast solve_pair(const MatrixXd& values, const HypothesisPair& pair) {
  const MatrixXd y = centered(values);
  Contrast c;
  c.sigma1 = analytical_covariance(y, pair.resolved_1);
  const MatrixXd raw2 = analytical_covariance(y, pair.resolved_2);
  c.sigma2 = whiten(raw2).regularized;
  c.top = optimal_directions(c.sigma1, raw2, 1).vectors.col(0);
  return c;
}

IndexSet remap_rows(const IndexSet& rows, const std::vector<Index>& new_index) {
  IndexSet out;
  for (Index r : rows) {
    const Index k = new_index[static_cast<std::size_t>(r)];
    if (k >= 0) out.push_back(k);
  }
  return out;
}

MatrixXd stability_replicate(const ExperimentConfig& c, Index replicate) {
  const SeededRng rng(c.seed);
  const auto data_seed = splitmix64(c.seed ^ splitmix64(static_cast<std::uint64_t>(replicate) + 1));
  const SyntheticData s = generate(c, data_seed);
  const Index n = s.data.rows();
  const Index m = s.data.cols();
  const MatrixXd& base = s.data.values();

  auto tile_engine = rng.substream(replicate, 0);
  std::vector<Tile> user;
  for (int k = 0; k < 3; ++k) user.push_back(random_factor_tile(s, tile_engine));
  const Tile focus = random_factor_tile(s, tile_engine);
  HypothesisSpec spec{focus.rows, {}};
  for (Index col : focus.cols) spec.partition.push_back({col});

  const MatrixXd clean = zscore(Dataset(base, s.data.column_names())).values();
  const Contrast reference = solve_pair(clean, assemble(user, spec, n, m));
  const double best = gain(reference.top, reference.sigma1, reference.sigma2);

  MatrixXd errors(static_cast<Index>(c.noise.size()), static_cast<Index>(c.removals.size()));
  for (std::size_t r = 0; r < c.removals.size(); ++r) {
    const Index removed = c.removals[r];
    if (removed >= n - 1) {
      throw Error("config.invalid", "cannot remove " + std::to_string(removed) + " of " + std::to_string(n) + " rows");
    }
    IndexSet kept;
    HypothesisSpec spec_p;
    std::vector<Tile> user_p;
    for (std::uint64_t attempt = 0;; ++attempt) {
      auto engine = rng.substream(replicate, 1, static_cast<std::uint64_t>(removed), attempt);
      IndexSet order = iota_set(n);
      shuffle(order.begin(), order.end(), engine);
      kept = normalized(IndexSet(order.begin() + removed, order.end()));
      std::vector<Index> new_index(static_cast<std::size_t>(n), -1);
      for (std::size_t k = 0; k < kept.size(); ++k) new_index[static_cast<std::size_t>(kept[k])] = static_cast<Index>(k);
      spec_p = HypothesisSpec{remap_rows(spec.rows, new_index), spec.partition};
      user_p.clear();
      for (const auto& t : user) {
        auto rows = remap_rows(t.rows, new_index);
        if (!rows.empty()) user_p.push_back(Tile{std::move(rows), t.cols});
      }
      if (!spec_p.rows.empty()) break;
    }

    auto noise_engine = rng.substream(replicate, 2, static_cast<std::uint64_t>(removed));
    MatrixXd z(static_cast<Index>(kept.size()), m);
    for (Index j = 0; j < m; ++j) {
      for (Index i = 0; i < z.rows(); ++i) z(i, j) = standard_normal(noise_engine);
    }
    const MatrixXd subset = base(kept, Eigen::all);
    const Index n_p = static_cast<Index>(kept.size());
    const auto pair_p = assemble(user_p, spec_p, n_p, m);

    for (std::size_t q = 0; q < c.noise.size(); ++q) {
      const MatrixXd noisy = subset + c.noise[q] * z;
      const MatrixXd rescaled = zscore(Dataset(noisy, s.data.column_names()), ConstantPolicy::zero).values();
      const Contrast found = solve_pair(rescaled, pair_p);
      const double achieved = gain(found.top, reference.sigma1, reference.sigma2);
      errors(static_cast<Index>(q), static_cast<Index>(r)) = (best - achieved) / best;
    }
  }
  return errors;
}

std::string format_number(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

}  // namespace

Table stability_experiment(const ExperimentConfig& c) {
  c.validate();
  std::vector<std::future<MatrixXd>> jobs;
  for (Index r = 0; r < c.replicates; ++r) {
    jobs.push_back(std::async(std::launch::async, [&c, r] { return stability_replicate(c, r); }));
  }
  Table t;
  t.title = "Mean relative error by noise sigma (rows) and removed rows (columns)";
  t.values = MatrixXd::Zero(static_cast<Index>(c.noise.size()), static_cast<Index>(c.removals.size()));
  for (auto& job : jobs) t.values += job.get();
  t.values /= static_cast<double>(c.replicates);
  for (double s : c.noise) t.row_labels.push_back("sigma=" + format_number(s));
  for (Index r : c.removals) t.col_labels.push_back("dn=" + std::to_string(r));
  return t;
}

// ---------------------------------------------------------------------------
// Timing

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("config.invalid", "slope needs at least two points");
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += std::log(x[k]);
    my += std::log(y[k]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double dx = std::log(x[k]) - mx;
    sxy += dx * (std::log(y[k]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

TimingResult timing_experiment(const ExperimentConfig& c) {
  c.validate();
  TimingResult out;
  out.table.title = "Median wall clock time (s)";
  out.table.col_labels = {"t_model", "t_view"};
  std::vector<std::pair<double, double>> rows;
  std::vector<double> sizes;
  std::vector<double> model_times;
  const SeededRng rng(c.seed);
  for (Index m : c.grid_m) {
    for (Index n : c.grid_n) {
      std::vector<double> t_model;
      std::vector<double> t_view;
      for (Index r = 0; r < c.replicates; ++r) {
        const auto s = make_gaussian(n, m, splitmix64(c.seed ^ static_cast<std::uint64_t>(n * 7919 + m * 104729 + r)));
        auto engine = rng.substream(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(m), r);
        std::vector<Tile> user;
        for (int k = 0; k < 3; ++k) user.push_back(random_factor_tile(s, engine));
        const Tile focus = random_factor_tile(s, engine);
        HypothesisSpec spec{focus.rows, {}};
        for (Index col : focus.cols) spec.partition.push_back({col});

        auto start = std::chrono::steady_clock::now();
        const auto pair = assemble(user, spec, n, m);
        t_model.push_back(seconds_since(start));

        start = std::chrono::steady_clock::now();
        const MatrixXd y = centered(s.data.values());
        const MatrixXd s1 = analytical_covariance(y, pair.resolved_1);
        const MatrixXd s2 = analytical_covariance(y, pair.resolved_2);
        const auto dirs = optimal_directions(s1, s2, 2);
        t_view.push_back(seconds_since(start));
        if (dirs.gains.size() != 2) throw Error("internal", "unexpected direction count");
      }
      const double tm = median(t_model);
      const double tv = median(t_view);
      rows.emplace_back(tm, tv);
      out.table.row_labels.push_back(std::to_string(n) + "x" + std::to_string(m));
      sizes.push_back(static_cast<double>(n) * static_cast<double>(m));
      model_times.push_back(tm);
    }
  }
  out.table.values.resize(static_cast<Index>(rows.size()), 2);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.table.values(static_cast<Index>(k), 0) = rows[k].first;
    out.table.values(static_cast<Index>(k), 1) = rows[k].second;
  }
  out.model_slope = sizes.size() >= 2 ? loglog_slope(sizes, model_times) : 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Gain matrix

Table gain_table(const Dataset& d, const std::vector<NamedPair>& pairs, bool include_pca) {
  if (pairs.empty()) throw Error("config.invalid", "gain table needs at least one hypothesis pair");
  std::vector<Contrast> contrasts;
  for (const auto& p : pairs) contrasts.push_back(solve_pair(d.values(), p.pair));

  std::vector<VectorXd> directions;
  Table t;
  t.title = "Gain G(v, H) by projection vector (rows) and hypothesis pair (columns)";
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    directions.push_back(contrasts[k].top);
    t.row_labels.push_back("v[" + pairs[k].name + "]");
    t.col_labels.push_back(pairs[k].name);
  }
  if (include_pca) {
    const MatrixXd y = centered(d.values());
    const MatrixXd corr = y.transpose() * y / static_cast<double>(y.rows());
    Eigen::SelfAdjointEigenSolver<MatrixXd> solver(corr);
    VectorXd pc = solver.eigenvectors().col(corr.cols() - 1);
    sign_normalize(pc);
    directions.push_back(pc);
    t.row_labels.push_back("v[pca]");
  }
  t.values.resize(static_cast<Index>(directions.size()), static_cast<Index>(pairs.size()));
  for (std::size_t i = 0; i < directions.size(); ++i) {
    for (std::size_t j = 0; j < pairs.size(); ++j) {
      t.values(static_cast<Index>(i), static_cast<Index>(j)) =
          gain(directions[i], contrasts[j].sigma1, contrasts[j].sigma2);
    }
  }
  return t;
}

std::vector<NamedPair> exploration_pairs(const SyntheticData& s) {
  const Index n = s.data.rows();
  const Index m = s.data.cols();
  if (s.planted_rows.size() < 2) throw Error("config.invalid", "generator did not plant a cluster");
  const auto suggestion = suggest_attributes(s.data, s.planted_rows, kExplorationTau);
  if (suggestion.included.empty()) throw Error("config.invalid", "planted cluster has no characteristic attributes");
  const Tile known = make_tile(s.planted_rows, suggestion.included);

  if (s.focus_rows.empty() || s.focus_partition.empty()) throw Error("config.invalid", "generator provides no focus");
  const HypothesisSpec focus{s.focus_rows, s.focus_partition};

  std::vector<NamedPair> pairs;
  pairs.push_back({"E,{}", assemble({}, unguided_spec(n, m), n, m)});
  pairs.push_back({"E,{t}", assemble({known}, unguided_spec(n, m), n, m)});
  pairs.push_back({"F,{}", assemble({}, focus, n, m)});
  pairs.push_back({"F,{t}", assemble({known}, focus, n, m)});
  return pairs;
}

Table gain_matrix(const ExperimentConfig& c) {
  c.validate();
  const SyntheticData s = generate(c, c.seed);
  return gain_table(s.data, exploration_pairs(s), true);
}

// ---------------------------------------------------------------------------
// Toy example

ToyReport toy_example(std::uint64_t seed, Index n) {
  auto engine = SeededRng(seed).substream(0);
  MatrixXd x(n, 4);
  for (Index i = 0; i < n; ++i) {
    const double a = standard_normal(engine);
    const double b = a + 0.2 * standard_normal(engine);
    x(i, 0) = a;
    x(i, 1) = b;
    x(i, 2) = a + 0.6 * standard_normal(engine);
    x(i, 3) = b + 0.6 * standard_normal(engine);
  }
  const Dataset d = zscore(Dataset(std::move(x), {"A", "B", "C", "D"}));
  const MatrixXd y = centered(d.values());
  const HypothesisSpec spec{iota_set(n), {{2}, {3}}};

  auto top = [&](std::vector<Tile> user) {
    const auto pair = assemble(std::move(user), spec, n, 4);
    const MatrixXd s1 = analytical_covariance(y, pair.resolved_1);
    const MatrixXd s2 = analytical_covariance(y, pair.resolved_2);
    return VectorXd(optimal_directions(s1, s2, 1).vectors.col(0));
  };

  ToyReport r;
  r.names = d.column_names();
  r.scenario1 = top({});
  r.scenario2 = top({make_tile(iota_set(n), {0, 2}), make_tile(iota_set(n), {1, 3})});
  VectorXd cd(4);
  cd << 0.0, 0.0, 1.0, 1.0;
  cd.normalize();
  r.scenario1_alignment = std::abs(r.scenario1.dot(cd));
  r.scenario2_ab_mass = (std::abs(r.scenario2(0)) + std::abs(r.scenario2(1))) / r.scenario2.cwiseAbs().sum();
  r.passed = r.scenario1_alignment >= 0.95 && r.scenario2_ab_mass >= 0.8;
  return r;
}

}  // namespace corand
