#include "corand/service.hpp"

#include <httplib.h>

#include <cstdlib>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <sstream>

#include "corand/io.hpp"
#include "corand/rng.hpp"
#include "corand/session.hpp"

namespace corand {

using nlohmann::json;

namespace {

const char* env(const char* name) {
  const char* v = std::getenv(name);
  return v && *v ? v : nullptr;
}

template <typename T>
T parse_number(const std::string& text, const std::string& what) {
  T value{};
  std::istringstream in(text);
  in >> value;
  if (!in || !in.eof()) throw Error("request.invalid", "cannot parse " + what + " from '" + text + "'");
  return value;
}

}  // namespace

ServiceConfig config_from_env(ServiceConfig base) {
  if (const char* v = env("CORAND_HOST")) base.host = v;
  if (const char* v = env("CORAND_PORT")) base.port = parse_number<int>(v, "CORAND_PORT");
  if (const char* v = env("CORAND_MAX_UPLOAD_BYTES")) {
    base.max_upload_bytes = parse_number<std::size_t>(v, "CORAND_MAX_UPLOAD_BYTES");
  }
  if (const char* v = env("CORAND_MAX_POINTS")) base.max_points = parse_number<Index>(v, "CORAND_MAX_POINTS");
  if (const char* v = env("CORAND_SNAPSHOT")) base.snapshot_path = v;
  return base;
}

int http_status(const std::string& code) {
  if (code == "session.not_found" || code == "dataset.not_found" || code == "route.not_found") return 404;
  if (code == "session.version_conflict" || code == "session.no_view") return 409;
  if (code == "dataset.too_large") return 413;
  if (code == "internal") return 500;
  return 400;
}

ApiError to_api_error(const Error& e) {
  ApiError out{http_status(e.code()), e.code(), e.what(), nullptr};
  if (const auto* p = dynamic_cast<const ParseError*>(&e)) out.detail = json{{"line", p->line()}};
  return out;
}

json to_json(const ApiError& e) {
  json out{{"code", e.code}, {"message", e.message}};
  if (!e.detail.is_null()) out["detail"] = e.detail;
  return out;
}

namespace {

struct Slot {
  Slot(Session s, std::string dataset) : session(std::move(s)), dataset_id(std::move(dataset)) {}
  std::shared_mutex mutex;
  Session session;
  std::string dataset_id;
};

void send(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(-1, ' ', false, json::error_handler_t::replace), "application/json");
}

void send_error(httplib::Response& res, const ApiError& e) { send(res, to_json(e), e.status); }

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    throw Error("request.invalid", std::string("request body is not valid JSON: ") + e.what());
  }
}

bool parse_bool(const std::string& v, const std::string& what) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw Error("request.invalid", "'" + what + "' must be true or false");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

CsvOptions csv_options(const httplib::Request& req) {
  CsvOptions o;
  if (req.has_param("delimiter")) {
    const auto d = req.get_param_value("delimiter");
    if (d == "tab" || d == "\\t") {
      o.delimiter = '\t';
    } else if (d.size() == 1) {
      o.delimiter = d[0];
    } else {
      throw Error("request.invalid", "delimiter must be a single character or 'tab'");
    }
  }
  if (req.has_param("header")) o.header = parse_bool(req.get_param_value("header"), "header");
  if (req.has_param("na")) {
    const auto na = req.get_param_value("na");
    if (na == "drop") {
      o.na_policy = NaPolicy::drop_row;
    } else if (na == "error") {
      o.na_policy = NaPolicy::error;
    } else {
      throw Error("request.invalid", "'na' must be drop or error");
    }
  }
  if (req.has_param("select")) o.select = split_list(req.get_param_value("select"));
  if (req.has_param("categorical")) o.categorical = split_list(req.get_param_value("categorical"));
  return o;
}

IndexSet rows_param(const std::string& v) {
  IndexSet rows;
  for (const auto& item : split_list(v)) rows.push_back(parse_number<Index>(item, "row index"));
  return rows;
}

json dataset_json(const std::string& id, const Dataset& d) {
  json groups = json::array();
  for (const auto& g : d.column_groups()) {
    groups.push_back({{"name", g.name}, {"columns", g.columns}, {"categorical", g.categorical}});
  }
  return json{{"id", id},
              {"n", d.rows()},
              {"m", d.cols()},
              {"columns", d.column_names()},
              {"groups", groups},
              {"scaling", to_string(d.scaling_state())}};
}

json coords_json(const MatrixXd& coords, const std::optional<IndexSet>& subset) {
  json out = json::array();
  if (subset) {
    for (Index i : *subset) out.push_back({coords(i, 0), coords(i, 1)});
  } else {
    for (Index i = 0; i < coords.rows(); ++i) out.push_back({coords(i, 0), coords(i, 1)});
  }
  return out;
}

}  // namespace

struct Service::Impl {
  explicit Impl(ServiceConfig c) : config(std::move(c)) { routes(); }

  ServiceConfig config;
  httplib::Server server;

  std::mutex store_mutex;
  std::map<std::string, std::shared_ptr<const Dataset>> datasets;
  std::map<std::string, std::shared_ptr<Slot>> sessions;
  std::uint64_t next_dataset = 1;
  std::uint64_t next_session = 1;
  std::mutex snapshot_mutex;

  std::string add_dataset(std::shared_ptr<const Dataset> d) {
    std::lock_guard lock(store_mutex);
    const std::string id = "d" + std::to_string(next_dataset++);
    datasets.emplace(id, std::move(d));
    return id;
  }

  std::shared_ptr<const Dataset> dataset(const std::string& id) {
    std::lock_guard lock(store_mutex);
    const auto it = datasets.find(id);
    if (it == datasets.end()) throw Error("dataset.not_found", "no dataset '" + id + "'");
    return it->second;
  }

  std::shared_ptr<Slot> slot(const std::string& id) {
    std::lock_guard lock(store_mutex);
    const auto it = sessions.find(id);
    if (it == sessions.end()) throw Error("session.not_found", "no session '" + id + "'");
    return it->second;
  }

  // Uniform seeded subset of rows when a dataset exceeds the point cap.
  std::optional<IndexSet> point_subset(const Session& s) const {
    const Index n = s.dataset().rows();
    if (n <= config.max_points) return std::nullopt;
    auto engine = SeededRng(s.seed()).substream(0x706f696e7473ULL);
    IndexSet rows = iota_set(n);
    shuffle(rows.begin(), rows.end(), engine);
    rows.resize(static_cast<std::size_t>(config.max_points));
    return normalized(std::move(rows));
  }

  static void check_version(const json& body, const httplib::Request& req, const Session& s) {
    std::optional<std::uint64_t> expected;
    if (body.is_object() && body.contains("version") && !body.at("version").is_null()) {
      if (!body.at("version").is_number_unsigned()) throw Error("request.invalid", "'version' must be an integer");
      expected = body.at("version").get<std::uint64_t>();
    } else if (req.has_param("version")) {
      expected = parse_number<std::uint64_t>(req.get_param_value("version"), "version");
    }
    if (expected && *expected != s.version()) {
      throw Error("session.version_conflict", "session is at version " + std::to_string(s.version()) +
                                                  ", request was made against version " + std::to_string(*expected));
    }
  }

  void save_snapshots() {
    if (config.snapshot_path.empty()) return;
    std::vector<std::shared_ptr<Slot>> slots;
    {
      std::lock_guard lock(store_mutex);
      for (const auto& [id, s] : sessions) slots.push_back(s);
    }
    json all = json::array();
    for (const auto& s : slots) {
      std::shared_lock lock(s->mutex);
      all.push_back(io::snapshot(s->session, s->dataset_id));
    }
    std::lock_guard lock(snapshot_mutex);
    io::write_json_file(config.snapshot_path, json{{"sessions", all}});
  }

  template <typename Fn>
  static httplib::Server::Handler guarded(Fn fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const Error& e) {
        send_error(res, to_api_error(e));
      } catch (const json::exception& e) {
        send_error(res, ApiError{400, "request.invalid", e.what(), nullptr});
      } catch (const std::bad_alloc&) {
        send_error(res, ApiError{500, "internal", "out of memory", nullptr});
      } catch (const std::exception& e) {
        send_error(res, ApiError{500, "internal", e.what(), nullptr});
      }
    };
  }

  void upload(const httplib::Request& req, httplib::Response& res) {
    std::string text;
    if (req.is_multipart_form_data()) {
      if (!req.has_file("file")) throw Error("request.invalid", "multipart upload needs a 'file' field");
      text = req.get_file_value("file").content;
    } else {
      text = req.body;
    }
    if (text.size() > config.max_upload_bytes) {
      throw Error("dataset.too_large", "upload exceeds " + std::to_string(config.max_upload_bytes) + " bytes");
    }
    Dataset d = load_csv_string(text, csv_options(req));
    if (!d.pending_categoricals().empty()) d = onehot_encode(d);
    ConstantPolicy policy = ConstantPolicy::error;
    if (req.has_param("constant")) {
      const auto c = req.get_param_value("constant");
      if (c == "zero") {
        policy = ConstantPolicy::zero;
      } else if (c != "error") {
        throw Error("request.invalid", "'constant' must be error or zero");
      }
    }
    if (!req.has_param("scale") || parse_bool(req.get_param_value("scale"), "scale")) d = zscore(d, policy);
    auto ptr = std::make_shared<const Dataset>(std::move(d));
    const auto id = add_dataset(ptr);
    send(res, dataset_json(id, *ptr), 201);
  }

  void create_session(const httplib::Request& req, httplib::Response& res) {
    const json body = parse_body(req);
    std::string dataset_id;
    if (body.contains("dataset_id")) {
      dataset_id = body.at("dataset_id").get<std::string>();
    } else if (body.contains("snapshot")) {
      dataset_id = body.at("snapshot").at("dataset").get<std::string>();
    } else {
      throw Error("request.invalid", "a session needs 'dataset_id' or 'snapshot'");
    }
    auto data = dataset(dataset_id);
    std::string id;
    {
      std::lock_guard lock(store_mutex);
      id = "s" + std::to_string(next_session++);
    }
    std::optional<Session> session;
    if (body.contains("snapshot")) {
      json snap = body.at("snapshot");
      snap["id"] = id;
      session.emplace(io::restore_session(snap, data));
    } else {
      session.emplace(data, body.value("seed", std::uint64_t{0}), id);
    }
    auto slot = std::make_shared<Slot>(std::move(*session), dataset_id);
    const json out = io::snapshot(slot->session, dataset_id);
    {
      std::lock_guard lock(store_mutex);
      sessions.emplace(id, std::move(slot));
    }
    save_snapshots();
    send(res, out, 201);
  }

  void view(const httplib::Request& req, httplib::Response& res) {
    auto s = slot(req.matches[1]);
    std::unique_lock lock(s->mutex);
    const auto& v = s->session.compute_view();
    const auto subset = point_subset(s->session);
    json out = io::to_json(v, false);
    out["coords"] = coords_json(v.coords, subset);
    if (subset) out["row_ids"] = *subset;
    out["version"] = s->session.version();
    out["n"] = s->session.dataset().rows();
    send(res, out);
  }

  void put_hypothesis(const httplib::Request& req, httplib::Response& res) {
    const json body = parse_body(req);
    auto s = slot(req.matches[1]);
    json out;
    {
      std::unique_lock lock(s->mutex);
      check_version(body, req, s->session);
      const auto& d = s->session.dataset();
      s->session.set_hypothesis(io::spec_from_json(body, d.rows(), d.cols(), &d));
      out = json{{"version", s->session.version()}, {"hypothesis", io::to_json(s->session.spec())}};
    }
    save_snapshots();
    send(res, out);
  }

  void suggest(const httplib::Request& req, httplib::Response& res) {
    const json body = parse_body(req);
    if (!body.contains("rows")) throw Error("request.invalid", "suggestion needs 'rows'");
    auto s = slot(req.matches[1]);
    std::shared_lock lock(s->mutex);
    const auto& d = s->session.dataset();
    const auto rows = normalized(body.at("rows").get<IndexSet>());
    if (rows.empty()) throw Error("selection.empty", "suggestion needs a nonempty selection");
    const auto suggestion = suggest_attributes(d, rows, body.value("tau", kDefaultTau));
    json out = io::to_json(suggestion, d.column_names());
    out["tile"] = json{{"rows", rows}, {"cols", suggestion.included}};
    out["version"] = s->session.version();
    send(res, out);
  }

  void post_tile(const httplib::Request& req, httplib::Response& res) {
    const json body = parse_body(req);
    auto s = slot(req.matches[1]);
    json out;
    {
      std::unique_lock lock(s->mutex);
      check_version(body, req, s->session);
      const Tile t = io::tile_from_json(body, &s->session.dataset());
      s->session.commit_tile(t.rows, t.cols, body.value("label", std::string{}));
      out = json{{"version", s->session.version()}, {"tile_count", s->session.user_tiles().size()}};
    }
    save_snapshots();
    send(res, out, 201);
  }

  void delete_last_tile(const httplib::Request& req, httplib::Response& res) {
    auto s = slot(req.matches[1]);
    json out;
    {
      std::unique_lock lock(s->mutex);
      check_version(json::object(), req, s->session);
      s->session.rollback_last_tile();
      out = json{{"version", s->session.version()}, {"tile_count", s->session.user_tiles().size()}};
    }
    save_snapshots();
    send(res, out);
  }

  void pcp(const httplib::Request& req, httplib::Response& res) {
    auto s = slot(req.matches[1]);
    const IndexSet rows = req.has_param("rows") ? rows_param(req.get_param_value("rows")) : IndexSet{};
    const double tau = req.has_param("tau") ? parse_number<double>(req.get_param_value("tau"), "tau") : kDefaultTau;
    std::shared_lock lock(s->mutex);
    json out = io::to_json(s->session.pcp_payload(rows, tau));
    out["version"] = s->session.version();
    send(res, out);
  }

  void sample(const httplib::Request& req, httplib::Response& res) {
    auto s = slot(req.matches[1]);
    if (!req.has_param("which")) throw Error("request.invalid", "sample needs 'which' (1 or 2)");
    const int which = parse_number<int>(req.get_param_value("which"), "which");
    const auto seed =
        req.has_param("seed") ? parse_number<std::uint64_t>(req.get_param_value("seed"), "seed") : std::uint64_t{0};
    std::shared_lock lock(s->mutex);
    const MatrixXd coords = s->session.sample_view(which, seed);
    const auto subset = point_subset(s->session);
    json out{{"which", which}, {"seed", seed}, {"version", s->session.version()}, {"coords", coords_json(coords, subset)}};
    if (subset) out["row_ids"] = *subset;
    send(res, out);
  }

  void routes() {
    server.set_payload_max_length(config.max_upload_bytes);
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
      ApiError e{res.status, "request.invalid", "request rejected", nullptr};
      if (res.status == 404) e = {404, "route.not_found", "no such endpoint", nullptr};
      if (res.status == 413) e = {413, "dataset.too_large", "request body exceeds the upload limit", nullptr};
      if (res.status >= 500) e = {res.status, "internal", "internal server error", nullptr};
      res.set_content(to_json(e).dump(), "application/json");
      return httplib::Server::HandlerResponse::Handled;
    });
    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, PUT, DELETE, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });

    server.Get("/health", [](const httplib::Request&, httplib::Response& res) { send(res, json{{"status", "ok"}}); });
    server.Post("/datasets", guarded([this](const auto& req, auto& res) { upload(req, res); }));
    server.Get(R"(/datasets/([^/]+))", guarded([this](const auto& req, auto& res) {
                 send(res, dataset_json(req.matches[1], *dataset(req.matches[1])));
               }));
    server.Post("/sessions", guarded([this](const auto& req, auto& res) { create_session(req, res); }));
    server.Get(R"(/sessions/([^/]+))", guarded([this](const auto& req, auto& res) {
                 auto s = slot(req.matches[1]);
                 std::shared_lock lock(s->mutex);
                 send(res, io::snapshot(s->session, s->dataset_id));
               }));
    server.Get(R"(/sessions/([^/]+)/view)", guarded([this](const auto& req, auto& res) { view(req, res); }));
    server.Put(R"(/sessions/([^/]+)/hypothesis)",
               guarded([this](const auto& req, auto& res) { put_hypothesis(req, res); }));
    server.Post(R"(/sessions/([^/]+)/suggest)", guarded([this](const auto& req, auto& res) { suggest(req, res); }));
    server.Post(R"(/sessions/([^/]+)/tiles)", guarded([this](const auto& req, auto& res) { post_tile(req, res); }));
    server.Delete(R"(/sessions/([^/]+)/tiles/last)",
                  guarded([this](const auto& req, auto& res) { delete_last_tile(req, res); }));
    server.Get(R"(/sessions/([^/]+)/pcp)", guarded([this](const auto& req, auto& res) { pcp(req, res); }));
    server.Get(R"(/sessions/([^/]+)/sample)", guarded([this](const auto& req, auto& res) { sample(req, res); }));
  }
};

Service::Service(ServiceConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

Service::~Service() { stop(); }

const ServiceConfig& Service::config() const noexcept { return impl_->config; }

int Service::bind() {
  auto& c = impl_->config;
  if (c.port == 0) {
    c.port = impl_->server.bind_to_any_port(c.host);
  } else if (!impl_->server.bind_to_port(c.host, c.port)) {
    c.port = -1;
  }
  if (c.port < 0) throw Error("service.bind_failed", "cannot bind " + c.host);
  return c.port;
}

bool Service::listen() { return impl_->server.listen_after_bind(); }

void Service::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

std::string Service::add_dataset(std::shared_ptr<const Dataset> data) { return impl_->add_dataset(std::move(data)); }

}  // namespace corand
