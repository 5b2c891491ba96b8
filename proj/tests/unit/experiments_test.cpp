#include <doctest.h>

#include <sstream>

#include "corand/experiments.hpp"
#include "../support/errors.hpp"

using namespace corand;
using nlohmann::json;

namespace {

ExperimentConfig small_stability() {
  ExperimentConfig c;
  c.generator = GeneratorKind::german_layout;
  c.n = 200;
  c.noise = {0.0, 1.0, 5.0};
  c.removals = {0, 50};
  c.replicates = 3;
  c.seed = 4;
  return c;
}

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("config JSON round-trip, defaults and hash") {
    const ExperimentConfig d = config_from_json(json::object());
    CHECK(d.n == 412);
    CHECK(d.noise == std::vector<double>{0.0, 1.0, 2.0, 5.0, 10.0});
    CHECK(d.removals == std::vector<Index>{0, 100, 200});
    ExperimentConfig c = small_stability();
    const ExperimentConfig r = config_from_json(to_json(c));
    CHECK(to_json(r) == to_json(c));
    CHECK(config_hash(r) == config_hash(c));
    c.seed = 5;
    CHECK(config_hash(r) != config_hash(c));
    CHECK(config_from_json(json{{"generator", "planted"}}).generator == GeneratorKind::planted);
  }

  TEST_CASE("invalid configs") {
    CHECK(error_code([] { config_from_json(json{{"replicates", 0}}); }) == "config.invalid");
    CHECK(error_code([] { config_from_json(json{{"noise", {-1.0}}}); }) == "config.invalid");
    CHECK(error_code([] { config_from_json(json{{"removals", json::array()}}); }) == "config.invalid");
    CHECK(error_code([] { config_from_json(json{{"n", "many"}}); }) == "config.invalid");
    CHECK(error_code([] { config_from_json(json{{"generator", "uniform"}}); }) == "config.invalid");
    CHECK(error_code([] { config_from_json(json{{"m", 1}}); }) == "config.invalid");
  }

  TEST_CASE("generators are deterministic and standardized") {
    for (const auto& s : {make_gaussian(100, 6, 2), make_planted(100, 6, 2), make_german_layout(100, 2)}) {
      const MatrixXd x = s.data.values();
      CHECK(x.colwise().mean().cwiseAbs().maxCoeff() <= 1e-12);
      CHECK(((x.array().square().colwise().sum() / 100.0).sqrt() - 1.0).abs().maxCoeff() <= 1e-12);
      CHECK_FALSE(s.factors.empty());
    }
    CHECK(make_planted(100, 6, 2).data.values() == make_planted(100, 6, 2).data.values());
    CHECK(make_planted(100, 6, 2).data.values() != make_planted(100, 6, 3).data.values());
    const auto p = make_planted(200, 10, 4);
    REQUIRE(p.focus_partition.size() == 4);
    IndexSet all;
    for (const auto& b : p.focus_partition) all.insert(all.end(), b.begin(), b.end());
    CHECK(normalized(all) == iota_set(10));
    CHECK(std::includes(p.focus_rows.begin(), p.focus_rows.end(), p.planted_rows.begin(), p.planted_rows.end()));
    CHECK(p.focus_rows.size() < 200);
    const auto g = make_german_layout(412, 1);
    CHECK(g.data.cols() == 32);
    CHECK(g.planted_cols.size() == 9);
    for (Index i : g.planted_rows) CHECK(std::binary_search(g.focus_rows.begin(), g.focus_rows.end(), i));
    CHECK(generator_from_string(to_string(GeneratorKind::german_layout)) == GeneratorKind::german_layout);
  }

  TEST_CASE("stability table is reproducible and exact at zero perturbation") {
    const ExperimentConfig c = small_stability();
    const Table a = stability_experiment(c);
    const Table b = stability_experiment(c);
    CHECK(a.values == b.values);
    CHECK(a.values.rows() == 3);
    CHECK(a.values.cols() == 2);
    CHECK(a.values(0, 0) == 0.0);
    CHECK((a.values.array() >= 0.0).all());
    CHECK((a.values.array() <= 1.0).all());
    CHECK(a.row_labels.front() == "sigma=0");
    CHECK(a.col_labels.back() == "dn=50");
  }

  TEST_CASE("removing every row is rejected") {
    ExperimentConfig c = small_stability();
    c.removals = {200};
    CHECK(error_code([&] { stability_experiment(c); }) == "config.invalid");
  }

  TEST_CASE("timing on a tiny grid") {
    ExperimentConfig c;
    c.generator = GeneratorKind::gaussian;
    c.grid_n = {100, 200};
    c.grid_m = {5};
    c.replicates = 1;
    const auto t = timing_experiment(c);
    CHECK(t.table.values.rows() == 2);
    CHECK(t.table.values.cols() == 2);
    CHECK((t.table.values.array() > 0.0).all());
    CHECK(std::isfinite(t.model_slope));
  }

  TEST_CASE("log-log slope") {
    CHECK(loglog_slope({1, 10, 100}, {3, 30, 300}) == doctest::Approx(1.0));
    CHECK(loglog_slope({1, 2, 4}, {1, 4, 16}) == doctest::Approx(2.0));
    CHECK(error_code([] { loglog_slope({1}, {1}); }) == "config.invalid");
  }

  TEST_CASE("a single pair gives a one-by-one table of at least one") {
    const auto s = make_planted(200, 6, 1);
    const auto pairs = exploration_pairs(s);
    const Table t = gain_table(s.data, {pairs.front()}, false);
    CHECK(t.values.rows() == 1);
    CHECK(t.values.cols() == 1);
    CHECK(t.values(0, 0) >= 1.0);
    CHECK(error_code([&] { gain_table(s.data, {}, false); }) == "config.invalid");
  }

  TEST_CASE("gain matrix favours its own hypothesis") {
    for (auto kind : {GeneratorKind::german_layout, GeneratorKind::planted}) {
      ExperimentConfig c;
      c.generator = kind;
      c.n = 412;
      c.m = 16;
      const Table t = gain_matrix(c);
      REQUIRE(t.values.rows() == 5);
      REQUIRE(t.values.cols() == 4);
      for (Index col = 0; col < 4; ++col) {
        for (Index row = 0; row < 4; ++row) CHECK(t.values(col, col) >= t.values(row, col) * (1 - 1e-9));
      }
      CHECK((t.values.row(4) - t.values.row(0)).cwiseAbs().maxCoeff() <= 1e-9 * t.values.row(0).cwiseAbs().maxCoeff());
      // The knowledge tile changes the focus direction.
      CHECK((t.values.row(2) - t.values.row(3)).cwiseAbs().maxCoeff() > 1e-3);
    }
  }

  TEST_CASE("rendered and CSV tables") {
    Table t{"demo", {"r1", "r2"}, {"c1"}, MatrixXd(2, 1)};
    t.values << 0.1234567, 2.0;
    const std::string text = render(t, 3);
    CHECK(text.find("0.123") != std::string::npos);
    CHECK(text.find("r2") != std::string::npos);
    std::ostringstream csv;
    write_table_csv(csv, t);
    CHECK(csv.str().find("0.1234567") != std::string::npos);
  }

  TEST_CASE("toy example") {
    const auto r = toy_example(1, 1000);
    CHECK(r.passed);
    CHECK(r.scenario1_alignment >= 0.95);
    CHECK(r.scenario2_ab_mass >= 0.8);
    CHECK(r.names == std::vector<std::string>{"A", "B", "C", "D"});
  }
}
