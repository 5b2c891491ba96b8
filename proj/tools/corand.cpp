#include <CLI11.hpp>

#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "corand/covariance.hpp"
#include "corand/experiments.hpp"
#include "corand/io.hpp"
#include "corand/projection.hpp"
#include "corand/sampler.hpp"
#include "corand/service.hpp"

namespace fs = std::filesystem;
using namespace corand;
using nlohmann::json;

namespace {

struct DataOptions {
  std::string path;
  std::string delimiter = ",";
  std::vector<std::string> select;
  std::vector<std::string> categorical;
  bool no_header = false;
  bool raw = false;
};

void add_data_options(CLI::App* cmd, DataOptions& o) {
  cmd->add_option("--data", o.path, "CSV file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--delimiter", o.delimiter, "field delimiter, or 'tab'");
  cmd->add_option("--select", o.select, "columns to keep");
  cmd->add_option("--categorical", o.categorical, "columns to one-hot encode");
  cmd->add_flag("--no-header", o.no_header, "first line is data");
  cmd->add_flag("--raw", o.raw, "skip z-scoring");
}

Dataset load(const DataOptions& o) {
  CsvOptions csv;
  if (o.delimiter == "tab") {
    csv.delimiter = '\t';
  } else if (o.delimiter.size() == 1) {
    csv.delimiter = o.delimiter[0];
  } else {
    throw Error("request.invalid", "delimiter must be a single character or 'tab'");
  }
  csv.header = !o.no_header;
  csv.select = o.select;
  csv.categorical = o.categorical;
  Dataset d = load_csv_file(o.path, csv);
  if (!d.pending_categoricals().empty()) d = onehot_encode(d);
  return o.raw ? d : zscore(d);
}

Tiling load_tiling(const std::string& path, Index n, Index m, const Dataset& d) {
  const json j = io::read_json_file(path);
  if (j.is_object() && j.contains("n")) {
    Tiling t = io::tiling_from_json(j);
    if (t.rows() != n || t.cols() != m) {
      throw Error("tiling.dimension_mismatch", "tiling is " + std::to_string(t.rows()) + "x" +
                                                   std::to_string(t.cols()) + ", data is " + std::to_string(n) +
                                                   "x" + std::to_string(m));
    }
    return t;
  }
  const auto tiles = io::tiles_from_json(j, &d);
  return tiling_from_tiles(n, m, tiles);
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw Error("io.open_failed", "cannot write '" + p.string() + "'");
  return out;
}

struct ExperimentOptions {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
};

void add_experiment_options(CLI::App* cmd, ExperimentOptions& o) {
  cmd->add_option("--config", o.config, "experiment config JSON")->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--seed", o.seed, "overrides the config seed");
}

ExperimentConfig experiment_config(const ExperimentOptions& o) {
  ExperimentConfig c = o.config.empty() ? ExperimentConfig{} : config_from_json(io::read_json_file(o.config));
  if (o.seed) c.seed = *o.seed;
  c.validate();
  return c;
}

void write_experiment(const ExperimentOptions& o, const std::string& name, const ExperimentConfig& c,
                      const Table& t, double seconds, json extra = json::object()) {
  fs::create_directories(o.out);
  auto csv = open_out(fs::path(o.out) / (name + ".csv"));
  write_table_csv(csv, t);
  json meta{{"experiment", name},
            {"config", to_json(c)},
            {"config_hash", config_hash(c)},
            {"seed", c.seed},
            {"wall_seconds", seconds}};
  meta.update(extra);
  io::write_json_file((fs::path(o.out) / (name + ".json")).string(), meta);
  std::cout << render(t) << std::flush;
}

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Service* running_service = nullptr;

void on_signal(int) {
  if (running_service) running_service->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained randomization and informative projections"};
  app.require_subcommand(1);

  DataOptions sample_data;
  std::string sample_tiling;
  std::uint64_t sample_seed = 0;
  Index sample_count = 1;
  std::string sample_out;
  auto* sample = app.add_subcommand("sample", "write permuted datasets allowed by a tiling");
  add_data_options(sample, sample_data);
  sample->add_option("--tiling", sample_tiling, "tiling or tile list JSON")->required()->check(CLI::ExistingFile);
  sample->add_option("--seed", sample_seed);
  sample->add_option("--count", sample_count)->check(CLI::PositiveNumber);
  sample->add_option("--out", sample_out, "output directory; stdout when omitted and count is 1");

  DataOptions cov_data;
  std::string cov_tiling;
  Index cov_draws = 0;
  std::uint64_t cov_seed = 0;
  auto* cov = app.add_subcommand("cov", "covariance of the distribution defined by a tiling");
  add_data_options(cov, cov_data);
  cov->add_option("--tiling", cov_tiling, "tiling or tile list JSON")->required()->check(CLI::ExistingFile);
  cov->add_option("--montecarlo", cov_draws, "estimate from this many samples instead");
  cov->add_option("--seed", cov_seed);

  DataOptions view_data;
  std::string view_hypothesis;
  std::string view_tiles;
  std::string view_out = "view";
  auto* view = app.add_subcommand("view", "most informative two-dimensional view");
  add_data_options(view, view_data);
  view->add_option("--hypothesis", view_hypothesis, "hypothesis JSON")->check(CLI::ExistingFile);
  view->add_option("--tiles", view_tiles, "user tiles JSON")->check(CLI::ExistingFile);
  view->add_option("--out", view_out, "writes OUT.csv (coords) and OUT.json");

  ExperimentOptions stab_opts, time_opts, gain_opts, toy_opts;
  auto* stability = app.add_subcommand("stability", "relative error under noise and row removal");
  add_experiment_options(stability, stab_opts);
  auto* timing = app.add_subcommand("timing", "median running times over an n x m grid");
  add_experiment_options(timing, time_opts);
  auto* gains = app.add_subcommand("gains", "gain of each optimal direction under every hypothesis pair");
  add_experiment_options(gains, gain_opts);
  auto* toy = app.add_subcommand("toy", "four-attribute example");
  add_experiment_options(toy, toy_opts);

  ServiceConfig service_config = config_from_env(ServiceConfig{});
  auto* serve = app.add_subcommand("serve", "REST service");
  serve->add_option("--host", service_config.host);
  serve->add_option("--port", service_config.port);
  serve->add_option("--max-upload-bytes", service_config.max_upload_bytes);
  serve->add_option("--max-points", service_config.max_points);
  serve->add_option("--snapshot", service_config.snapshot_path, "session snapshot file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*sample) {
      const Dataset d = load(sample_data);
      const Tiling t = load_tiling(sample_tiling, d.rows(), d.cols(), d);
      if (sample_out.empty() && sample_count != 1) {
        throw Error("request.invalid", "--out is required when --count is above 1");
      }
      SeededRng rng(sample_seed);
      if (!sample_out.empty()) fs::create_directories(sample_out);
      for (Index k = 0; k < sample_count; ++k) {
        const Dataset permuted = apply(d, sample_permutation(t, rng));
        if (sample_out.empty()) {
          write_csv(std::cout, permuted);
        } else {
          auto out = open_out(fs::path(sample_out) / ("sample_" + std::to_string(k + 1) + ".csv"));
          write_csv(out, permuted);
        }
      }
    } else if (*cov) {
      const Dataset d = load(cov_data);
      const Tiling t = load_tiling(cov_tiling, d.rows(), d.cols(), d);
      const auto y = center(d);
      SeededRng rng(cov_seed);
      const MatrixXd s = cov_draws > 0 ? montecarlo_covariance(y, t, cov_draws, rng) : analytical_covariance(y, t);
      write_matrix_csv(std::cout, s, d.column_names());
    } else if (*view) {
      const Dataset d = load(view_data);
      io::HypothesisFile h{unguided_spec(d.rows(), d.cols()), {}};
      if (!view_hypothesis.empty()) h = io::hypothesis_file_from_json(io::read_json_file(view_hypothesis), d);
      if (!view_tiles.empty()) {
        const auto extra = io::tiles_from_json(io::read_json_file(view_tiles), &d);
        h.user_tiles.insert(h.user_tiles.end(), extra.begin(), extra.end());
      }
      const auto pair = assemble(h.user_tiles, h.spec, d.rows(), d.cols());
      const auto y = center(d);
      const MatrixXd s1 = analytical_covariance(y, pair.resolved_1);
      const MatrixXd s2 = analytical_covariance(y, pair.resolved_2);
      const auto result = project(d, optimal_directions(s1, s2, 2));
      auto out = open_out(view_out + ".csv");
      write_matrix_csv(out, result.coords, {"x", "y"});
      io::write_json_file(view_out + ".json", io::to_json(result, false));
    } else if (*stability) {
      const auto c = experiment_config(stab_opts);
      const auto start = std::chrono::steady_clock::now();
      const Table t = stability_experiment(c);
      write_experiment(stab_opts, "stability", c, t, elapsed(start));
    } else if (*timing) {
      const auto c = experiment_config(time_opts);
      const auto start = std::chrono::steady_clock::now();
      const auto r = timing_experiment(c);
      write_experiment(time_opts, "timing", c, r.table, elapsed(start), json{{"model_slope", r.model_slope}});
    } else if (*gains) {
      const auto c = experiment_config(gain_opts);
      const auto start = std::chrono::steady_clock::now();
      const Table t = gain_matrix(c);
      write_experiment(gain_opts, "gains", c, t, elapsed(start));
    } else if (*toy) {
      const auto c = experiment_config(toy_opts);
      const auto start = std::chrono::steady_clock::now();
      const auto r = toy_example(c.seed);
      Table t;
      t.title = "Most informative direction";
      t.row_labels = {"no knowledge", "A~C, B~D known"};
      t.col_labels = r.names;
      t.values.resize(2, 4);
      t.values.row(0) = r.scenario1.transpose();
      t.values.row(1) = r.scenario2.transpose();
      write_experiment(toy_opts, "toy", c, t, elapsed(start),
                       json{{"scenario1_alignment", r.scenario1_alignment},
                            {"scenario2_ab_mass", r.scenario2_ab_mass},
                            {"passed", r.passed}});
      return r.passed ? 0 : 1;
    } else if (*serve) {
      Service service(service_config);
      const int port = service.bind();
      running_service = &service;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "listening on " << service_config.host << ':' << port << std::endl;
      service.listen();
      running_service = nullptr;
    }
  } catch (const ParseError& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
