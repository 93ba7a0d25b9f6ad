#include "dsl/service.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <map>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "dsl/engine.hpp"
#include "dsl/error.hpp"
#include "dsl/ingestion.hpp"

namespace dsl {

namespace fs = std::filesystem;

namespace {

using json = nlohmann::ordered_json;

struct HttpError {
  int status;
  std::string code;
  std::string message;
};

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SessionDone: return 410;
    case ErrorCode::NoPendingQuery:
    case ErrorCode::PendingQueryExists: return 409;
    case ErrorCode::IoError: return 500;
    default: return 422;
  }
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool valid_dataset_id(const std::string& id) {
  if (id.empty() || id.size() > 200 || id.front() == '.') return false;
  return std::all_of(id.begin(), id.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-' || c == '.';
  });
}

std::vector<std::string> header_names(const std::string& text) {
  const auto eol = text.find_first_of("\r\n");
  const std::string line = text.substr(0, eol);
  std::vector<std::string> names;
  std::string cur;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      names.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  names.push_back(cur);
  for (auto& n : names) {
    const auto b = n.find_first_not_of(" \t");
    const auto e = n.find_last_not_of(" \t");
    n = b == std::string::npos ? "" : n.substr(b, e - b + 1);
  }
  return names;
}

struct SessionConfig {
  std::string dataset_id;
  std::string csv;
  std::optional<ColumnRef> label_column;
  std::optional<ColumnRef> id_column;
  std::string metric = "euclidean";
  std::uint64_t seed = 0;
  OracleMode oracle = OracleMode::Interactive;
  std::optional<std::size_t> budget;
  std::string normalize = "none";
};

json column_json(const std::optional<ColumnRef>& c) {
  if (!c) return nullptr;
  if (const auto* s = std::get_if<std::string>(&*c)) return *s;
  return std::get<std::size_t>(*c);
}

std::optional<ColumnRef> column_from(const json& body, const char* key) {
  if (!body.contains(key) || body[key].is_null()) return std::nullopt;
  const auto& v = body[key];
  if (v.is_string()) return ColumnRef{v.get<std::string>()};
  if (v.is_number_unsigned()) return ColumnRef{v.get<std::size_t>()};
  throw HttpError{400, "BadRequest", std::string(key) + " must be a column name or index"};
}

json config_json(const SessionConfig& c) {
  json j;
  if (!c.dataset_id.empty()) j["dataset"] = c.dataset_id;
  if (!c.csv.empty()) j["csv"] = c.csv;
  j["label_column"] = column_json(c.label_column);
  j["id_column"] = column_json(c.id_column);
  j["metric"] = c.metric;
  j["seed"] = c.seed;
  j["oracle"] = c.oracle == OracleMode::Interactive ? "interactive" : "labels";
  j["budget"] = c.budget ? json(*c.budget) : json(nullptr);
  j["normalize"] = c.normalize;
  return j;
}

SessionConfig config_from(const json& body) {
  if (!body.is_object()) throw HttpError{400, "BadRequest", "request body must be a JSON object"};
  SessionConfig c;
  if (body.contains("dataset")) c.dataset_id = body["dataset"].get<std::string>();
  if (body.contains("csv")) c.csv = body["csv"].get<std::string>();
  if (c.dataset_id.empty() == c.csv.empty())
    throw HttpError{400, "BadRequest", "give exactly one of \"dataset\" or \"csv\""};
  c.label_column = column_from(body, "label_column");
  c.id_column = column_from(body, "id_column");
  if (body.contains("metric")) c.metric = body["metric"].get<std::string>();
  if (body.contains("seed")) c.seed = body["seed"].get<std::uint64_t>();
  if (body.contains("oracle")) {
    const auto o = body["oracle"].get<std::string>();
    if (o == "interactive") {
      c.oracle = OracleMode::Interactive;
    } else if (o == "labels" || o == "ground_truth") {
      c.oracle = OracleMode::GroundTruth;
    } else {
      throw HttpError{422, "InvalidSpec", "oracle must be \"interactive\" or \"labels\""};
    }
  }
  if (body.contains("budget") && !body["budget"].is_null()) c.budget = body["budget"].get<std::size_t>();
  if (body.contains("normalize")) c.normalize = body["normalize"].get<std::string>();
  return c;
}

Metric metric_for(const SessionConfig& c) {
  if (c.metric == "euclidean") return Metric::euclidean();
  if (c.metric == "cosine") return Metric::cosine();
  if (c.metric == "random") return Metric::random(c.seed);
  throw HttpError{422, "InvalidSpec", "metric must be euclidean, cosine or random"};
}

struct Record {
  std::string id;
  SessionConfig config;
  std::string created_at;
  std::shared_ptr<const Dataset> dataset;
  Metric metric = Metric::euclidean();

  std::mutex engine_mu;
  std::unique_ptr<Session> session;
  std::string failure;
  std::optional<std::string> last_token;

  mutable std::mutex view_mu;
  json view;
  std::thread worker;
};

}  // namespace

struct Service::Impl {
  ServiceOptions options;
  httplib::Server server;
  mutable std::mutex map_mu;
  std::map<std::string, std::shared_ptr<Record>> sessions;
  std::atomic<std::uint64_t> sequence{0};
  std::uint64_t epoch = static_cast<std::uint64_t>(
      std::chrono::steady_clock::now().time_since_epoch().count());
  bool shut_down = false;
  int port = -1;

  explicit Impl(ServiceOptions o) : options(std::move(o)) { routes(); }

  // ---- datasets ----------------------------------------------------------

  fs::path dataset_path(const std::string& id) const {
    if (options.registry_dir.empty() || !valid_dataset_id(id))
      throw HttpError{404, "NotFound", "unknown dataset '" + id + "'"};
    const fs::path p = fs::path(options.registry_dir) / (id + ".csv");
    if (!fs::is_regular_file(p)) throw HttpError{404, "NotFound", "unknown dataset '" + id + "'"};
    return p;
  }

  json list_datasets() const {
    json out = json::array();
    if (options.registry_dir.empty() || !fs::is_directory(options.registry_dir)) return out;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(options.registry_dir))
      if (e.is_regular_file() && e.path().extension() == ".csv" && valid_dataset_id(e.path().stem().string()))
        files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& p : files) {
      const auto text = read_text_file(p.string());
      std::size_t lines = 0;
      bool content = false;
      for (char c : text) {
        if (c == '\n') {
          lines += content;
          content = false;
        } else if (c != '\r') {
          content = true;
        }
      }
      lines += content;
      json item;
      item["id"] = p.stem().string();
      item["rows"] = lines == 0 ? 0 : lines - 1;
      item["columns"] = header_names(text);
      out.push_back(std::move(item));
    }
    return out;
  }

  std::shared_ptr<const Dataset> load_dataset(SessionConfig& c) const {
    const std::string text = c.csv.empty() ? read_text_file(dataset_path(c.dataset_id).string()) : c.csv;
    CsvOptions o;
    o.normalize = parse_normalization(c.normalize);
    o.label_column = c.label_column;
    o.id_column = c.id_column;
    if (!o.label_column) {
      for (const auto& name : header_names(text))
        if (name == "label" || name == "class") {
          o.label_column = name;
          break;
        }
    }
    c.label_column = o.label_column;
    return std::make_shared<const Dataset>(parse_csv(text, o));
  }

  // ---- state documents ---------------------------------------------------

  static std::string status_of(const Record& r) {
    if (!r.failure.empty()) return "failed";
    if (!r.session) return "initializing";
    if (r.session->done()) return "done";
    if (r.session->pending()) return "awaiting_answer";
    return "running";
  }

  static std::string token_for(const Record& r) {
    const auto& q = *r.session->pending();
    std::uint64_t h = mix64(fnv1a(r.id));
    h = mix64(h ^ r.session->query_count());
    h = mix64(h ^ (static_cast<std::uint64_t>(q.i) << 32 | q.j));
    return hex64(h);
  }

  json item_json(const Dataset& ds, NodeId i) const {
    json item;
    item["id"] = ds.id_of(i);
    const auto row = ds.row(i);
    item["features"] = std::vector<double>(row.begin(), row.end());
    return item;
  }

  json trace_json(const IceTrace& t, std::size_t tail) const {
    json out = json::array();
    const auto& s = t.samples();
    const std::size_t from = s.size() > tail ? s.size() - tail : 0;
    for (std::size_t k = from; k < s.size(); ++k) {
      json item;
      item["queries"] = s[k].queries;
      item["ari"] = s[k].ari ? json(*s[k].ari) : json(nullptr);
      item["clusters"] = s[k].clusters;
      out.push_back(std::move(item));
    }
    return out;
  }

  json state_of(const Record& r) const {
    json doc;
    doc["session_id"] = r.id;
    doc["dataset_id"] = r.config.dataset_id.empty() ? json(nullptr) : json(r.config.dataset_id);
    doc["status"] = status_of(r);
    doc["created_at"] = r.created_at;
    doc["oracle"] = r.config.oracle == OracleMode::Interactive ? "interactive" : "labels";
    doc["metric"] = r.config.metric;
    doc["seed"] = r.config.seed;
    doc["n"] = r.dataset->size();
    doc["d"] = r.dataset->dims();
    doc["feature_names"] = r.dataset->feature_names();
    if (!r.failure.empty()) {
      doc["message"] = r.failure;
      return doc;
    }
    if (!r.session) return doc;
    const Session& s = *r.session;
    doc["query_count"] = s.query_count();
    doc["step_count"] = s.step_count();
    doc["cluster_count"] = s.cluster_count();
    doc["budget"] = s.options().budget ? json(*s.options().budget) : json(nullptr);
    if (s.done()) doc["stop_reason"] = std::string(to_string(s.stop_reason()));
    if (const auto ari = s.current_ari()) doc["ari"] = *ari;
    if (const auto& q = s.pending()) {
      json p;
      p["token"] = token_for(r);
      p["i"] = q->i;
      p["j"] = q->j;
      p["item_i"] = item_json(*r.dataset, q->i);
      p["item_j"] = item_json(*r.dataset, q->j);
      doc["pending"] = std::move(p);
    }
    doc["trace_tail"] = trace_json(s.trace(), options.trace_tail);
    return doc;
  }

  void refresh(Record& r) const {
    auto doc = state_of(r);
    std::lock_guard lock(r.view_mu);
    r.view = std::move(doc);
  }

  static json view_of(const Record& r) {
    std::lock_guard lock(r.view_mu);
    return r.view;
  }

  // ---- sessions ----------------------------------------------------------

  std::shared_ptr<Record> find(const std::string& id) const {
    std::lock_guard lock(map_mu);
    const auto it = sessions.find(id);
    if (it == sessions.end()) throw HttpError{404, "NotFound", "unknown session '" + id + "'"};
    return it->second;
  }

  std::string fresh_id() {
    for (;;) {
      const std::string id = "s" + hex64(mix64(epoch ^ ++sequence)).substr(0, 12);
      std::lock_guard lock(map_mu);
      if (!sessions.contains(id)) return id;
    }
  }

  // Runs with r.engine_mu held.
  void initialize(Record& r, const std::vector<PairwiseConstraint>* replay = nullptr,
                  bool accepted = false) {
    try {
      SessionOptions so;
      so.seed = r.config.seed;
      so.budget = r.config.budget;
      so.oracle = r.config.oracle;
      r.session = std::make_unique<Session>(r.dataset, r.metric, so);
      refresh(r);
      r.session->drive();
      if (replay) {
        for (const auto& c : *replay) {
          const auto& q = r.session->pending();
          if (!q || q->i != c.a || q->j != c.b) {
            spdlog::warn("session {}: stored answers diverge after {} queries", r.id,
                         r.session->query_count());
            break;
          }
          r.session->resume_with_answer(c.theta);
          r.session->drive();
        }
        if (accepted) r.session->accept();
      }
    } catch (const std::exception& e) {
      r.session.reset();
      r.failure = e.what();
      spdlog::error("session {}: initialization failed: {}", r.id, e.what());
    }
    refresh(r);
  }

  std::shared_ptr<Record> create(SessionConfig config, std::string id = {}, std::string created = {},
                                 const std::vector<PairwiseConstraint>* replay = nullptr,
                                 bool accepted = false) {
    auto r = std::make_shared<Record>();
    r->dataset = load_dataset(config);
    r->metric = metric_for(config);
    if (config.oracle == OracleMode::GroundTruth && !r->dataset->has_labels())
      throw HttpError{422, "MissingLabels", "the labels oracle needs a label column"};
    r->config = std::move(config);
    r->id = id.empty() ? fresh_id() : std::move(id);
    r->created_at = created.empty() ? utc_now() : std::move(created);
    refresh(*r);
    {
      std::lock_guard lock(map_mu);
      sessions[r->id] = r;
    }
    spdlog::info("session {} created: n={} d={} metric={} oracle={}", r->id, r->dataset->size(),
                 r->dataset->dims(), r->config.metric,
                 r->config.oracle == OracleMode::Interactive ? "interactive" : "labels");
    if (r->dataset->size() > options.async_threshold) {
      std::vector<PairwiseConstraint> answers = replay ? *replay : std::vector<PairwiseConstraint>{};
      const bool has_replay = replay != nullptr;
      // Writers see no session until the worker has built it and answer 409.
      r->worker = std::thread([this, r, answers = std::move(answers), has_replay, accepted]() mutable {
        std::lock_guard lock(r->engine_mu);
        initialize(*r, has_replay ? &answers : nullptr, accepted);
      });
    } else {
      std::lock_guard lock(r->engine_mu);
      initialize(*r, replay, accepted);
    }
    return r;
  }

  json answer(const std::string& id, const json& body) {
    auto r = find(id);
    if (!body.is_object() || !body.contains("verdict"))
      throw HttpError{400, "BadRequest", "body needs a \"verdict\""};
    const auto verdict = body["verdict"].get<std::string>();
    std::optional<std::string> token;
    if (body.contains("token") && !body["token"].is_null()) token = body["token"].get<std::string>();

    std::lock_guard lock(r->engine_mu);
    if (!r->session) throw HttpError{409, "NoPendingQuery", "session is " + status_of(*r)};
    if (token && token == r->last_token) return view_of(*r);
    if (r->session->done()) throw HttpError{410, "SessionDone", "session is done"};
    if (!r->session->pending()) throw HttpError{409, "NoPendingQuery", "no query is pending"};
    const std::string current = token_for(*r);
    if (token && *token != current) return view_of(*r);

    Theta theta;
    if (verdict == "must_link") {
      theta = Theta::MustLink;
    } else if (verdict == "cannot_link") {
      theta = Theta::CannotLink;
    } else {
      throw HttpError{422, "InvalidSpec", "verdict must be \"must_link\" or \"cannot_link\""};
    }
    r->session->resume_with_answer(theta);
    r->last_token = current;
    r->session->drive();
    refresh(*r);
    spdlog::debug("session {}: answer {} -> {} queries", r->id, verdict, r->session->query_count());
    return view_of(*r);
  }

  json accept(const std::string& id) {
    auto r = find(id);
    std::lock_guard lock(r->engine_mu);
    if (!r->session) throw HttpError{409, "NotReady", "session is " + status_of(*r)};
    r->session->accept();
    refresh(*r);
    json doc = view_of(*r);
    doc["labels"] = r->session->labels();
    return doc;
  }

  template <class Fn>
  auto with_session(const std::string& id, Fn fn) {
    auto r = find(id);
    std::lock_guard lock(r->engine_mu);
    if (!r->session) throw HttpError{409, "NotReady", "session is " + status_of(*r)};
    return fn(*r->session);
  }

  // ---- persistence -------------------------------------------------------

  void persist() {
    if (!options.persist_dir) return;
    fs::create_directories(*options.persist_dir);
    std::lock_guard map_lock(map_mu);
    for (const auto& [id, r] : sessions) {
      std::lock_guard lock(r->engine_mu);
      if (!r->session) continue;
      json doc;
      doc["session_id"] = id;
      doc["created_at"] = r->created_at;
      doc["config"] = config_json(r->config);
      json answers = json::array();
      for (const auto& c : r->session->constraints().constraints())
        answers.push_back({c.a, c.b, theta_weight(c.theta)});
      doc["answers"] = std::move(answers);
      doc["accepted"] = r->session->accepted();
      write_text_file((fs::path(*options.persist_dir) / (id + ".json")).string(), doc.dump(2) + "\n");
    }
    spdlog::info("persisted {} sessions to {}", sessions.size(), *options.persist_dir);
  }

  void restore() {
    if (!options.persist_dir || !fs::is_directory(*options.persist_dir)) return;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(*options.persist_dir))
      if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& p : files) {
      try {
        const auto doc = json::parse(read_text_file(p.string()));
        std::vector<PairwiseConstraint> answers;
        for (const auto& a : doc["answers"])
          answers.push_back({a[0].get<NodeId>(), a[1].get<NodeId>(),
                             a[2].get<int>() == 0 ? Theta::MustLink : Theta::CannotLink});
        create(config_from(doc["config"]), doc["session_id"].get<std::string>(),
               doc["created_at"].get<std::string>(), &answers, doc.value("accepted", false));
      } catch (const std::exception& e) {
        spdlog::warn("cannot restore {}: {}", p.string(), e.what());
      } catch (const HttpError& e) {
        spdlog::warn("cannot restore {}: {}", p.string(), e.message);
      }
    }
  }

  void join_workers() {
    std::vector<std::shared_ptr<Record>> all;
    {
      std::lock_guard lock(map_mu);
      for (const auto& [_, r] : sessions) all.push_back(r);
    }
    for (auto& r : all)
      if (r->worker.joinable()) r->worker.join();
  }

  // ---- HTTP --------------------------------------------------------------

  static void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  static void send_error(httplib::Response& res, int status, const std::string& code,
                         const std::string& message) {
    json body;
    body["error"] = code;
    body["message"] = message;
    send_json(res, status, body);
  }

  template <class Fn>
  static httplib::Server::Handler guarded(Fn fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const HttpError& e) {
        send_error(res, e.status, e.code, e.message);
      } catch (const Error& e) {
        send_error(res, status_for(e.code()), std::string(to_string(e.code())), e.what());
      } catch (const json::exception& e) {
        send_error(res, 400, "BadRequest", e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, "Internal", e.what());
      }
    };
  }

  static json body_of(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    return json::parse(req.body);
  }

  void routes() {
    server.Get("/api/health", guarded([](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200, json{{"status", "ok"}});
    }));
    server.Get("/api/datasets", guarded([this](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200, list_datasets());
    }));
    server.Post("/api/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto r = create(config_from(body_of(req)));
      send_json(res, 201, view_of(*r));
    }));
    server.Get(R"(/api/sessions/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      send_json(res, 200, view_of(*find(req.matches[1])));
    }));
    server.Post(R"(/api/sessions/([^/]+)/answer)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  send_json(res, 200, answer(req.matches[1], body_of(req)));
                }));
    server.Post(R"(/api/sessions/([^/]+)/accept)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  send_json(res, 200, accept(req.matches[1]));
                }));
    server.Get(R"(/api/sessions/([^/]+)/snapshot)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const auto doc = with_session(req.matches[1], [](Session& s) { return export_snapshot(s); });
                 send_json(res, 200, doc);
               }));
    server.Get(R"(/api/sessions/([^/]+)/trace)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const auto csv = with_session(req.matches[1], [](Session& s) { return s.trace().to_csv(); });
                 res.set_content(csv, "text/csv");
               }));
    if (options.static_dir && !server.set_mount_point("/", *options.static_dir))
      spdlog::warn("static directory {} not found", *options.static_dir);
  }
};

Service::Service(ServiceOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {
  impl_->restore();
}

Service::~Service() {
  stop();
  shutdown();
}

bool Service::bind(const std::string& host, int port) {
  if (port == 0) {
    impl_->port = impl_->server.bind_to_any_port(host);
    return impl_->port > 0;
  }
  if (!impl_->server.bind_to_port(host, port)) return false;
  impl_->port = port;
  return true;
}

int Service::port() const noexcept { return impl_->port; }

void Service::serve() { impl_->server.listen_after_bind(); }

void Service::stop() { impl_->server.stop(); }

void Service::shutdown() {
  if (impl_->shut_down) return;
  impl_->shut_down = true;
  impl_->join_workers();
  impl_->persist();
}

std::size_t Service::session_count() const {
  std::lock_guard lock(impl_->map_mu);
  return impl_->sessions.size();
}

}  // namespace dsl
