#include <doctest.h>

#include <random>
#include <sstream>

#include "corand/dataset.hpp"
#include "../support/errors.hpp"

using namespace corand;

namespace {

double population_variance(const VectorXd& x) { return (x.array() - x.mean()).square().mean(); }

MatrixXd random_matrix(Index n, Index m, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> z(3.0, 2.0);
  MatrixXd x(n, m);
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < n; ++i) x(i, j) = z(g);
  }
  return x;
}

}  // namespace

TEST_SUITE("dataset") {
  TEST_CASE("three-line csv parses into two rows and two named columns") {
    const Dataset d = load_csv_string("a,b\n1,2\n3,4");
    CHECK(d.rows() == 2);
    CHECK(d.cols() == 2);
    CHECK(d.column_names() == std::vector<std::string>{"a", "b"});
    CHECK(d.values()(1, 0) == 3.0);
    CHECK(d.scaling_state() == ScalingState::raw);
    REQUIRE(d.column_groups().size() == 2);
    CHECK(d.column_groups()[1].columns == IndexSet{1});
  }

  TEST_CASE("rows with NA tokens are dropped by default") {
    const Dataset d = load_csv_string("a,b\n1,2\nNA,4\n5,6\n7,\n");
    CHECK(d.rows() == 2);
    CHECK(d.values()(1, 0) == 5.0);
  }

  TEST_CASE("NA under the error policy reports the line") {
    CsvOptions o;
    o.na_policy = NaPolicy::error;
    try {
      load_csv_string("a,b\n1,2\nNA,4\n", o);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.code() == "csv.na");
      CHECK(e.line() == 3);
    }
  }

  TEST_CASE("a row with the wrong field count is a parse error with its line") {
    try {
      load_csv_string("a,b\n1,2\n3,4,5\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.code() == "csv.bad_row");
      CHECK(e.line() == 3);
    }
  }

  TEST_CASE("empty tables are rejected") {
    CHECK(error_code([] { load_csv_string(""); }) == "csv.empty");
    CHECK(error_code([] { load_csv_string("a,b\n"); }) == "csv.empty");
  }

  TEST_CASE("quoted fields, other delimiters and headerless input") {
    CsvOptions o;
    o.delimiter = ';';
    const Dataset d = load_csv_string("\"x;1\";y\n1;2\n3;4\n", o);
    CHECK(d.column_names()[0] == "x;1");
    CsvOptions h;
    h.header = false;
    const Dataset e = load_csv_string("1,2\n3,4\n", h);
    CHECK(e.rows() == 2);
    CHECK(e.column_names().size() == 2);
  }

  TEST_CASE("column selection keeps the listed columns only") {
    std::ostringstream csv;
    for (int j = 0; j < 46; ++j) csv << (j ? "," : "") << "c" << j;
    csv << '\n';
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 46; ++j) csv << (j ? "," : "") << i * j;
      csv << '\n';
    }
    CsvOptions o;
    for (int j = 0; j < 32; ++j) o.select.push_back("c" + std::to_string(j + 7));
    const Dataset d = load_csv_string(csv.str(), o);
    CHECK(d.cols() == 32);
    CHECK(d.column_names().front() == "c7");
    o.select.push_back("missing");
    CHECK(error_code([&] { load_csv_string(csv.str(), o); }) == "csv.unknown_column");
  }

  TEST_CASE("non-numeric columns become pending categoricals") {
    const Dataset d = load_csv_string("x,sex,y\n1,M,2\n2,F,3\n3,F,5\n4,M,7\n");
    CHECK(d.cols() == 2);
    REQUIRE(d.pending_categoricals().size() == 1);
    CHECK(d.pending_categoricals()[0].name == "sex");
    CHECK(d.pending_categoricals()[0].position == 1);
  }

  TEST_CASE("zscore of [1,2,3] uses the population deviation") {
    const Dataset d(MatrixXd((MatrixXd(3, 1) << 1, 2, 3).finished()), {"a"});
    const Dataset z = zscore(d);
    const double s = std::sqrt(2.0 / 3.0);
    CHECK(z.values()(0, 0) == doctest::Approx(-1.0 / s).epsilon(1e-12));
    CHECK(z.values()(0, 0) == doctest::Approx(-1.2247).epsilon(1e-4));
    CHECK(z.values()(1, 0) == doctest::Approx(0.0));
    CHECK(z.values()(2, 0) == doctest::Approx(1.0 / s).epsilon(1e-12));
    CHECK(z.scaling_state() == ScalingState::zscored);
  }

  TEST_CASE("zscore gives mean 0 and population variance 1 and is idempotent") {
    const Dataset d(random_matrix(50, 5, 11), {"a", "b", "c", "d", "e"});
    const Dataset z = zscore(d);
    for (Index j = 0; j < 5; ++j) {
      CHECK(std::abs(z.values().col(j).mean()) <= 1e-9);
      CHECK(std::abs(population_variance(z.values().col(j)) - 1.0) <= 1e-9);
    }
    CHECK((zscore(z).values() - z.values()).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(center(z).values.colwise().mean().cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(center(z).column_means.cwiseAbs().maxCoeff() <= 1e-9);
  }

  TEST_CASE("constant columns raise an error naming the column unless zeroed") {
    MatrixXd x(3, 2);
    x << 1, 5, 2, 5, 3, 5;
    const Dataset d(x, {"a", "flat"});
    try {
      zscore(d);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == "dataset.constant_column");
      CHECK(std::string(e.what()).find("flat") != std::string::npos);
    }
    const Dataset z = zscore(d, ConstantPolicy::zero);
    CHECK(z.values().col(1).isZero());
  }

  TEST_CASE("binary 50/50 column becomes two indicators scaled by 1/sqrt(0.5)") {
    const Dataset d = load_csv_string("x,sex\n1,M\n2,F\n3,F\n4,M\n");
    const Dataset e = onehot_encode(d);
    REQUIRE(e.cols() == 3);
    CHECK(e.column_names() == std::vector<std::string>{"x", "sex.F", "sex.M"});
    const double scale = 1.0 / std::sqrt(0.5);
    CHECK(e.values()(0, 1) == doctest::Approx(0.0));
    CHECK(e.values()(1, 1) == doctest::Approx(scale).epsilon(1e-12));
    CHECK(population_variance(e.values().col(1)) == doctest::Approx(0.5).epsilon(1e-12));
    REQUIRE(e.column_groups().size() == 2);
    CHECK(e.column_groups()[1].name == "sex");
    CHECK(e.column_groups()[1].categorical);
    CHECK(e.column_groups()[1].columns == IndexSet{1, 2});
    CHECK(e.scaling_state() == ScalingState::group_scaled);
  }

  TEST_CASE("a 68-label variable becomes 68 columns of total variance 1") {
    std::ostringstream csv;
    csv << "v,x\n";
    std::mt19937_64 g(5);
    for (int i = 0; i < 500; ++i) csv << "L" << (i < 68 ? i : static_cast<int>(g() % 68)) << ',' << i << '\n';
    const Dataset e = onehot_encode(load_csv_string(csv.str()));
    CHECK(e.cols() == 69);
    double total = 0;
    for (Index c : e.column_groups()[0].columns) total += population_variance(e.values().col(c));
    CHECK(e.column_groups()[0].columns.size() == 68);
    CHECK(std::abs(total - 1.0) <= 1e-9);
  }

  TEST_CASE("encoding leaves purely numeric data unchanged and rejects single labels") {
    const Dataset d = load_csv_string("a,b\n1,2\n3,5\n");
    CHECK(onehot_encode(d).values() == d.values());
    CHECK(error_code([] { onehot_encode(load_csv_string("a,b\n1,K\n2,K\n")); }) == "dataset.single_label");
  }

  TEST_CASE("forced categorical columns are encoded even when numeric") {
    CsvOptions o;
    o.categorical = {"region"};
    const Dataset e = onehot_encode(load_csv_string("x,region\n1.5,1\n2.5,2\n0.5,3\n", o));
    CHECK(e.cols() == 4);
  }

  TEST_CASE("centering") {
    const Dataset d(MatrixXd((MatrixXd(4, 2) << 1, 0, 2, 0, 3, 0, 4, 0).finished()), {"a", "z"});
    const CenteredData c = center(d);
    CHECK(c.values(0, 0) == -1.5);
    CHECK(c.values(1, 0) == -0.5);
    CHECK(c.values(3, 0) == 1.5);
    CHECK(c.values.col(1).isZero());
    CHECK(centered(c.values) == c.values);
  }

  TEST_CASE("centering round-trips and column sums vanish") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Dataset d(random_matrix(40, 4, seed), {"a", "b", "c", "d"});
      const CenteredData c = center(d);
      const MatrixXd back = c.values.rowwise() + c.column_means.transpose();
      CHECK((back - d.values()).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK(c.values.colwise().sum().cwiseAbs().maxCoeff() <= 1e-9 * 40);
    }
  }

  TEST_CASE("structural invariants") {
    CHECK(error_code([] { Dataset(MatrixXd::Zero(1, 2), {"a", "b"}); }) == "dataset.too_few_rows");
    CHECK(error_code([] { Dataset(MatrixXd::Zero(2, 2), {"a"}); }) != "");
    MatrixXd bad = MatrixXd::Zero(2, 1);
    bad(0, 0) = std::numeric_limits<double>::infinity();
    CHECK(error_code([&] { Dataset(bad, {"a"}); }) != "");
    CHECK(error_code([] { load_csv_string("a\n1\ninf\n"); }) == "csv.non_finite");
    const Dataset d = load_csv_string("a,b\n1,2\n3,4\n");
    CHECK(d.column_index("b") == 1);
    CHECK(error_code([&] { d.column_index("q"); }) == "dataset.unknown_column");
  }

  TEST_CASE("written csv reads back to the same values") {
    const Dataset d(random_matrix(10, 3, 9), {"a", "b", "c"});
    std::ostringstream out;
    write_csv(out, d);
    const Dataset back = load_csv_string(out.str());
    CHECK(back.column_names() == d.column_names());
    CHECK(back.values() == d.values());
  }
}
