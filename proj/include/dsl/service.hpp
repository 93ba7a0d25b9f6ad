#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

namespace dsl {

struct ServiceOptions {
  /// Directory of `<id>.csv` files served as datasets.
  std::string registry_dir;
  /// Sessions over more rows than this are built on a worker thread.
  std::size_t async_threshold = 20000;
  /// When set, sessions are written here on shutdown and replayed on start.
  std::optional<std::string> persist_dir;
  /// When set, files under this directory are served at "/".
  std::optional<std::string> static_dir;
  std::size_t trace_tail = 20;
};

/// REST front end over interactive sessions.
///
///   POST /api/sessions              create
///   GET  /api/sessions/{id}         state
///   POST /api/sessions/{id}/answer  {"verdict", "token"}
///   POST /api/sessions/{id}/accept
///   GET  /api/sessions/{id}/snapshot
///   GET  /api/sessions/{id}/trace   text/csv
///   GET  /api/datasets
///   GET  /api/health
///
/// Errors are {"error": code, "message": text}.
class Service {
 public:
  explicit Service(ServiceOptions options);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds without serving. Port 0 picks a free port. Returns false when the
  /// address cannot be bound.
  bool bind(const std::string& host, int port);
  int port() const noexcept;
  /// Blocks until stop().
  void serve();
  void stop();

  /// Waits for background initializations, then persists if configured.
  void shutdown();

  std::size_t session_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace dsl
