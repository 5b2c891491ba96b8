#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>

#include <json.hpp>

#include "corand/dataset.hpp"

namespace corand {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t max_upload_bytes = 64u << 20;
  // Views and samples of larger datasets return a seeded uniform subset of
  // this many rows, with their row ids.
  Index max_points = 20000;
  // When set, session snapshots are rewritten here after every mutation.
  std::string snapshot_path;
};

// Overrides from CORAND_HOST, CORAND_PORT, CORAND_MAX_UPLOAD_BYTES,
// CORAND_MAX_POINTS and CORAND_SNAPSHOT.
ServiceConfig config_from_env(ServiceConfig base);

struct ApiError {
  int status = 400;
  std::string code;
  std::string message;
  nlohmann::json detail;  // null when absent
};

// HTTP status for an engine error code.
int http_status(const std::string& code);
ApiError to_api_error(const Error& e);
nlohmann::json to_json(const ApiError& e);

// In-memory dataset and session store behind a REST interface.
//
//   POST   /datasets                      CSV body or multipart field "file"
//   GET    /datasets/{id}
//   POST   /sessions                      {dataset_id, seed} or {snapshot}
//   GET    /sessions/{id}                 snapshot
//   GET    /sessions/{id}/view
//   PUT    /sessions/{id}/hypothesis      {rows, partition, version?}
//   POST   /sessions/{id}/suggest         {rows, tau?}
//   POST   /sessions/{id}/tiles           {rows, cols, label?, version?}
//   DELETE /sessions/{id}/tiles/last      ?version=
//   GET    /sessions/{id}/pcp             ?rows=1,2,3&tau=
//   GET    /sessions/{id}/sample          ?which=1|2&seed=
//
// Mutations carrying a stale "version" fail with 409.
class Service {
 public:
  explicit Service(ServiceConfig config = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  const ServiceConfig& config() const noexcept;

  // Binds config().host; port 0 picks a free port. Returns the bound port.
  int bind();
  // Serves until stop(); call after bind().
  bool listen();
  void stop();
  void wait_until_ready() const;

  // Registers an already prepared dataset and returns its id.
  std::string add_dataset(std::shared_ptr<const Dataset> data);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace corand
