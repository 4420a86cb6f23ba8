#include "brdlab/service.hpp"

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <regex>
#include <stop_token>
#include <thread>
#include <vector>

#include "brdlab/constructions.hpp"
#include "brdlab/equilibria.hpp"
#include "brdlab/errors.hpp"
#include "brdlab/experiments.hpp"
#include "brdlab/json_io.hpp"
#include "brdlab/specs.hpp"
#include "brdlab/spectral.hpp"

// After the Eigen headers: resolv.h, pulled in here, defines a _res macro
// that collides with Eigen parameter names.
#include <httplib.h>

namespace brdlab {

void ServiceConfig::apply_environment() {
  auto get = [](const char* name) -> std::optional<std::string> {
    const char* v = std::getenv(name);
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::string(v);
  };
  if (auto v = get("BRDLAB_HOST")) host = *v;
  if (auto v = get("BRDLAB_PORT")) port = static_cast<int>(detail::parse_size(*v));
  if (auto v = get("BRDLAB_WORKERS")) workers = detail::parse_size(*v);
  if (auto v = get("BRDLAB_N_CAP")) n_cap = detail::parse_size(*v);
  if (auto v = get("BRDLAB_SWEEP_BUDGET")) sweep_budget = detail::parse_size(*v);
  if (auto v = get("BRDLAB_SYNC_N_LIMIT")) sync_n_limit = detail::parse_size(*v);
  if (auto v = get("BRDLAB_MAX_JOBS")) max_active_jobs = detail::parse_size(*v);
  if (auto v = get("BRDLAB_CORS_ORIGIN")) cors_origin = *v;
}

namespace {

class TaskPool {
 public:
  explicit TaskPool(std::size_t threads) {
    for (std::size_t k = 0; k < threads; ++k)
      threads_.emplace_back([this](std::stop_token st) { loop(st); });
  }

  ~TaskPool() {
    for (auto& t : threads_) t.request_stop();
    cv_.notify_all();
  }

  void submit(std::function<void()> task) {
    {
      std::lock_guard lock(mutex_);
      queue_.push_back(std::move(task));
    }
    cv_.notify_one();
  }

 private:
  void loop(std::stop_token st) {
    while (true) {
      std::function<void()> task;
      {
        std::unique_lock lock(mutex_);
        if (!cv_.wait(lock, st, [&] { return !queue_.empty(); })) return;
        task = std::move(queue_.front());
        queue_.pop_front();
      }
      task();
    }
  }

  std::mutex mutex_;
  std::condition_variable_any cv_;
  std::deque<std::function<void()>> queue_;
  std::vector<std::jthread> threads_;
};

enum class JobKind { simulate, sweep };
enum class JobStatus { queued, running, done, failed };

const char* to_string(JobKind k) { return k == JobKind::simulate ? "simulate" : "sweep"; }

const char* to_string(JobStatus s) {
  switch (s) {
    case JobStatus::queued: return "queued";
    case JobStatus::running: return "running";
    case JobStatus::done: return "done";
    case JobStatus::failed: return "failed";
  }
  return "failed";
}

struct Job {
  std::string id;
  JobKind kind;
  std::mutex mutex;
  JobStatus status = JobStatus::queued;
  std::string reason;
  std::stop_source stop;
  // Sweeps: rows fill in any order; `ready` counts the finished prefix.
  std::vector<std::optional<SweepRow>> rows;
  std::size_t ready = 0;
  std::size_t finished = 0;
  std::string result;

  bool terminal() const { return status == JobStatus::done || status == JobStatus::failed; }

  double progress() const {
    if (status == JobStatus::done) return 1.0;
    if (rows.empty()) return 0.0;
    return static_cast<double>(finished) / static_cast<double>(rows.size());
  }
};

struct HttpError {
  int status;
  std::string message;
};

ApiResponse json_response(int status, const Json& body) {
  return {status, "application/json", body.dump()};
}

ApiResponse error_response(int status, const std::string& message) {
  return json_response(status, Json{{"error", message}});
}

Json parse_body(const std::string& body) {
  Json j = Json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw HttpError{400, "request body must be a JSON object"};
  return j;
}

const std::string& required(const ApiRequest& r, const std::string& key) {
  auto it = r.query.find(key);
  if (it == r.query.end() || it->second.empty()) throw HttpError{400, "missing query parameter '" + key + "'"};
  return it->second;
}

}  // namespace

struct ApiService::Impl {
  ServiceConfig config;
  std::mutex jobs_mutex;
  std::map<std::string, std::shared_ptr<Job>> jobs;
  std::atomic<std::uint64_t> next_id{0};
  // Declared last so its threads stop before the job table goes away.
  TaskPool pool;

  explicit Impl(ServiceConfig c)
      : config(std::move(c)),
        pool(config.workers ? config.workers : std::max(1u, std::thread::hardware_concurrency())) {}

  void check_size(const Graph& g) const {
    if (g.size() > config.n_cap)
      throw GuardError("graph has " + std::to_string(g.size()) + " vertices, cap is " +
                       std::to_string(config.n_cap));
  }

  std::shared_ptr<Job> create_job(JobKind kind) {
    std::lock_guard lock(jobs_mutex);
    std::size_t active = 0;
    for (auto& [id, job] : jobs) {
      std::lock_guard jl(job->mutex);
      if (!job->terminal()) ++active;
    }
    if (active >= config.max_active_jobs) throw HttpError{429, "too many active jobs"};
    auto job = std::make_shared<Job>();
    job->id = "job-" + std::to_string(++next_id);
    job->kind = kind;
    jobs[job->id] = job;
    return job;
  }

  std::shared_ptr<Job> find_job(const std::string& id) {
    std::lock_guard lock(jobs_mutex);
    auto it = jobs.find(id);
    if (it == jobs.end()) throw HttpError{404, "unknown job '" + id + "'"};
    return it->second;
  }

  // Runs `body` on the pool, recording success or failure on the job.
  void launch(const std::shared_ptr<Job>& job, std::function<std::string(std::stop_token)> body) {
    pool.submit([job, body = std::move(body)] {
      {
        std::lock_guard lock(job->mutex);
        if (job->terminal()) return;
        job->status = JobStatus::running;
      }
      std::string result;
      std::string failure;
      try {
        result = body(job->stop.get_token());
      } catch (const Cancelled&) {
        failure = "cancelled";
      } catch (const std::exception& e) {
        failure = e.what();
      }
      std::lock_guard lock(job->mutex);
      if (job->terminal()) return;
      if (failure.empty()) {
        job->status = JobStatus::done;
        job->result = std::move(result);
      } else {
        job->status = JobStatus::failed;
        job->reason = failure;
      }
    });
  }

  static Json handle_json(Job& job) {
    Json out = {{"id", job.id},
                {"kind", to_string(job.kind)},
                {"status", to_string(job.status)},
                {"progress", job.progress()}};
    if (!job.reason.empty()) out["reason"] = job.reason;
    return out;
  }

  ApiResponse simulate(const ApiRequest& req) {
    const Json body = parse_body(req.body);
    std::optional<ScenarioBundle> bundle;
    std::optional<Graph> graph;
    if (body.contains("scenario")) {
      if (!body["scenario"].is_string()) throw InputError("'scenario' must be a string");
      auto bundles = make_scenario(body["scenario"].get<std::string>());
      const std::size_t k = body.value("index", std::size_t{0});
      if (k >= bundles.size()) throw InputError("scenario index out of range");
      bundle = std::move(bundles[k]);
      graph = bundle->graph;
    } else if (body.contains("graph") && body["graph"].is_string()) {
      graph = parse_graph_spec(body["graph"].get<std::string>());
    } else if (body.contains("graph") && body["graph"].is_object()) {
      graph = graph_from_json(body["graph"]);
    } else {
      throw InputError("body needs 'graph' (spec string or graph object) or 'scenario'");
    }
    check_size(*graph);
    const std::size_t n = graph->size();

    DynamicsConfig base;
    base.record = n <= config.sync_n_limit ? RecordLevel::full : RecordLevel::events;
    if (bundle) {
      base.delta = bundle->delta_hint;
      base.epsilon = bundle->epsilon_hint;
      const auto v = bundle->initial.values();
      base.initial = {InitialKind::explicit_profile, std::vector<double>(v.begin(), v.end())};
    }
    DynamicsConfig cfg = dynamics_config_from_json(body, base);
    cfg.residual_points = std::min<std::size_t>(cfg.residual_points, 5000);
    cfg.validate(n);
    const std::size_t trace_points = std::min<std::size_t>(body.value("trace_points", std::size_t{2000}), 2000);
    const bool use_schedule = bundle && bundle->schedule && !body.value("random_order", false);

    auto compute = [graph = *graph, cfg, trace_points, use_schedule,
                    schedule = use_schedule ? *bundle->schedule : std::vector<Vertex>{}](std::stop_token st) {
      TrajectoryRecord rec;
      if (use_schedule) {
        ReplayOptions opt{cfg.epsilon_reshuffle, cfg.record, cfg.residual_points};
        const StrategyProfile x0(cfg.initial.values);
        rec = replay_schedule(graph, cfg.delta, x0, schedule, cfg.epsilon, opt);
      } else {
        rec = run(graph, cfg, st);
      }
      Json out = to_json(rec, trace_points);
      out["delta"] = cfg.delta;
      out["seed"] = cfg.seed;
      return out.dump();
    };

    if (n <= config.sync_n_limit && !body.value("async", false))
      return {200, "application/json", compute(std::stop_token{})};
    auto job = create_job(JobKind::simulate);
    launch(job, compute);
    std::lock_guard lock(job->mutex);
    return json_response(202, handle_json(*job));
  }

  ApiResponse sweep(const ApiRequest& req) {
    const Json body = parse_body(req.body);
    SweepSpec spec = sweep_spec_from_json(body);
    spec.validate();
    check_size(parse_graph_spec(spec.graph_spec));
    if (spec.cell_count() > config.sweep_budget)
      throw HttpError{429, "sweep has " + std::to_string(spec.cell_count()) + " cells, budget is " +
                               std::to_string(config.sweep_budget)};
    auto job = create_job(JobKind::sweep);
    {
      std::lock_guard lock(job->mutex);
      job->rows.resize(spec.cell_count());
    }
    launch(job, [job, spec](std::stop_token st) {
      SweepOptions opt;
      opt.workers = 1;
      opt.stop = st;
      opt.on_row = [&job](std::size_t k, const SweepRow& row) {
        std::lock_guard lock(job->mutex);
        job->rows[k] = row;
        ++job->finished;
        while (job->ready < job->rows.size() && job->rows[job->ready]) ++job->ready;
      };
      return to_csv(run_sweep(spec, opt));
    });
    std::lock_guard lock(job->mutex);
    return json_response(202, handle_json(*job));
  }

  ApiResponse job_status(const ApiRequest& req, const std::string& id) {
    auto job = find_job(id);
    std::size_t since = 0;
    if (auto it = req.query.find("since"); it != req.query.end()) since = detail::parse_size(it->second);
    std::lock_guard lock(job->mutex);
    Json out = handle_json(*job);
    if (job->kind == JobKind::sweep) {
      Json rows = Json::array();
      for (std::size_t k = since; k < job->ready; ++k) rows.push_back(to_json(*job->rows[k]));
      out["total_rows"] = job->rows.size();
      out["rows_ready"] = job->ready;
      out["since"] = since;
      out["rows"] = std::move(rows);
    }
    return json_response(200, out);
  }

  ApiResponse job_result(const ApiRequest& req, const std::string& id) {
    auto job = find_job(id);
    std::lock_guard lock(job->mutex);
    if (job->status != JobStatus::done) {
      Json out = handle_json(*job);
      out["error"] = std::string("job is ") + to_string(job->status);
      return json_response(409, out);
    }
    if (job->kind == JobKind::simulate) return {200, "application/json", job->result};
    const auto it = req.query.find("format");
    const std::string format = it == req.query.end() ? "csv" : it->second;
    if (format == "csv") return {200, "text/csv", job->result};
    if (format != "json") throw InputError("format must be csv or json");
    Json rows = Json::array();
    for (const auto& r : job->rows) rows.push_back(to_json(*r));
    return json_response(200, Json{{"rows", std::move(rows)}});
  }

  ApiResponse job_cancel(const std::string& id) {
    auto job = find_job(id);
    job->stop.request_stop();
    std::lock_guard lock(job->mutex);
    if (!job->terminal()) {
      job->status = JobStatus::failed;
      job->reason = "cancelled";
    }
    return json_response(200, handle_json(*job));
  }

  ApiResponse graph_info(const ApiRequest& req) {
    const Graph g = parse_graph_spec(required(req, "spec"));
    check_size(g);
    const Spectrum sp = eigenvalues_sym(g);
    Json lines = Json::array();
    for (const ThresholdLine& l : threshold_lines(g)) lines.push_back({{"value", l.value}, {"sign", l.sign}});
    return json_response(200, Json{{"graph", to_json(g)},
                                   {"spectrum", sp.eigenvalues},
                                   {"lambda_min", sp.min()},
                                   {"threshold_lines", std::move(lines)}});
  }

  ApiResponse equilibria(const ApiRequest& req) {
    const Graph g = parse_graph_spec(required(req, "spec"));
    check_size(g);
    const double delta = detail::parse_real(required(req, "delta"));
    if (!(delta >= 0.0 && delta <= 1.0)) throw InputError("delta must lie in [0,1]");
    Json reports = Json::array();
    std::string method;
    if (g.size() <= 20) {
      method = "brute_force";
      for (const ActiveSetReport& r : enumerate_stable_active_sets(g, delta)) reports.push_back(to_json(r));
    } else if (g.size() <= 64 && g == generators::path(g.size())) {
      method = "path_blocks";
      for (const PathConfiguration& c : enumerate_path_configurations(g.size(), delta).configurations)
        reports.push_back(to_json(solve_on_active_set(g, delta, c.active_set())));
    } else {
      method = "full_set_only";
      reports.push_back(to_json(solve_on_active_set(g, delta, VertexSet::all(g.size()))));
    }
    return json_response(200, Json{{"method", method},
                                   {"delta", delta},
                                   {"uniqueness", to_string(uniqueness_regime(g, delta))},
                                   {"reports", std::move(reports)}});
  }

  ApiResponse scenario(const ApiRequest& req) {
    Json bundles = Json::array();
    for (const ScenarioBundle& b : make_scenario(required(req, "name"))) {
      check_size(b.graph);
      bundles.push_back(to_json(b));
    }
    return json_response(200, Json{{"bundles", std::move(bundles)}});
  }

  static ApiResponse presets() {
    Json list = Json::array();
    for (const std::string& name : preset_names()) {
      const Preset p = preset(name);
      Json sweeps = Json::array();
      for (const SweepSpec& s : p.sweeps) sweeps.push_back(to_json(s));
      list.push_back({{"name", p.name}, {"description", p.description}, {"sweeps", std::move(sweeps)}});
    }
    return json_response(200, Json{{"presets", std::move(list)}});
  }

  ApiResponse route(const ApiRequest& req) {
    static const std::regex job_path(R"(/api/jobs/([A-Za-z0-9_-]+)(/result|/cancel)?)");
    const bool get = req.method == "GET";
    const bool post = req.method == "POST";
    if (post && req.path == "/api/simulate") return simulate(req);
    if (post && req.path == "/api/sweep") return sweep(req);
    if (get && req.path == "/api/graph") return graph_info(req);
    if (get && req.path == "/api/equilibria") return equilibria(req);
    if (get && req.path == "/api/scenario") return scenario(req);
    if (get && req.path == "/api/presets") return presets();
    std::smatch m;
    if (std::regex_match(req.path, m, job_path)) {
      const std::string id = m[1];
      const std::string tail = m[2];
      if (get && tail.empty()) return job_status(req, id);
      if (get && tail == "/result") return job_result(req, id);
      if (post && tail == "/cancel") return job_cancel(id);
    }
    throw HttpError{404, "no route for " + req.method + " " + req.path};
  }
};

ApiService::ApiService(ServiceConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

ApiService::~ApiService() {
  std::lock_guard lock(impl_->jobs_mutex);
  for (auto& [id, job] : impl_->jobs) job->stop.request_stop();
}

const ServiceConfig& ApiService::config() const { return impl_->config; }

ApiResponse ApiService::handle(const ApiRequest& request) {
  try {
    return impl_->route(request);
  } catch (const HttpError& e) {
    return error_response(e.status, e.message);
  } catch (const GuardError& e) {
    return error_response(413, e.what());
  } catch (const GenerationError& e) {
    return error_response(422, e.what());
  } catch (const DomainError& e) {
    return error_response(422, e.what());
  } catch (const InputError& e) {
    return error_response(400, e.what());
  } catch (const Json::exception& e) {
    return error_response(400, e.what());
  } catch (const std::exception& e) {
    return error_response(500, e.what());
  }
}

void ApiService::mount(httplib::Server& server) {
  const std::string origin = impl_->config.cors_origin;
  auto cors = [origin](httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", origin);
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  };
  auto forward = [this, cors](const httplib::Request& req, httplib::Response& res) {
    ApiRequest r{req.method, req.path, {}, req.body};
    for (const auto& [k, v] : req.params) r.query.emplace(k, v);
    const ApiResponse out = handle(r);
    cors(res);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  server.Get(R"(/api/.*)", forward);
  server.Post(R"(/api/.*)", forward);
  server.Options(R"(/api/.*)", [cors](const httplib::Request&, httplib::Response& res) {
    cors(res);
    res.status = 204;
  });
}

}  // namespace brdlab
