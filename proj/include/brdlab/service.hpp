#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>

namespace httplib {
class Server;
}

namespace brdlab {

struct ServiceConfig {
  std::string host = "0.0.0.0";
  int port = 8080;
  /// Threads running queued jobs; 0 selects hardware_concurrency().
  std::size_t workers = 0;
  /// Largest graph accepted by any endpoint.
  std::size_t n_cap = 2000;
  /// Largest delta-count * trials accepted for one sweep.
  std::size_t sweep_budget = 100000;
  /// Simulations on graphs up to this size are answered synchronously.
  std::size_t sync_n_limit = 200;
  /// Jobs that may be queued or running at once.
  std::size_t max_active_jobs = 64;
  std::string cors_origin = "*";

  /// Overrides fields from BRDLAB_HOST, BRDLAB_PORT, BRDLAB_WORKERS,
  /// BRDLAB_N_CAP, BRDLAB_SWEEP_BUDGET, BRDLAB_SYNC_N_LIMIT,
  /// BRDLAB_MAX_JOBS and BRDLAB_CORS_ORIGIN when set.
  void apply_environment();
};

struct ApiRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// JSON facade over simulation, sweeps, spectra and equilibria.
///
///   POST /api/simulate            trajectory (200) or job handle (202)
///   POST /api/sweep               job handle (202)
///   GET  /api/jobs/{id}           status and finished rows (?since=k)
///   GET  /api/jobs/{id}/result    CSV (default) or JSON (?format=json)
///   POST /api/jobs/{id}/cancel
///   GET  /api/graph?spec=
///   GET  /api/equilibria?spec=&delta=
///   GET  /api/scenario?name=
///   GET  /api/presets
///
/// Jobs live in memory only. Errors are {"error": message} with 400 for
/// bad input, 404 for unknown routes or jobs, 409 for results that are not
/// ready, 413 for graphs over the size cap, 422 for graphs that cannot be
/// built and 429 when the sweep budget or job limit is exceeded.
class ApiService {
 public:
  explicit ApiService(ServiceConfig config = {});
  ~ApiService();
  ApiService(const ApiService&) = delete;
  ApiService& operator=(const ApiService&) = delete;

  ApiResponse handle(const ApiRequest& request);

  /// Routes every /api path of the server to handle() and adds CORS headers.
  void mount(httplib::Server& server);

  const ServiceConfig& config() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace brdlab
