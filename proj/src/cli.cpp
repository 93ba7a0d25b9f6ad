#include "dsl/cli.hpp"

#include <signal.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "dsl/engine.hpp"
#include "dsl/error.hpp"
#include "dsl/ingestion.hpp"
#include "dsl/service.hpp"

namespace dsl {

namespace {

using Clock = std::chrono::steady_clock;

constexpr int kConfigError = 2;
constexpr int kDataError = 3;
constexpr int kPortInUse = 4;

struct CliError {
  int exit_code;
  std::string code;
  std::string message;
};

int report(const CliError& e) {
  nlohmann::ordered_json doc;
  doc["error"] = e.code;
  doc["message"] = e.message;
  std::cerr << doc.dump() << '\n';
  return e.exit_code;
}

int exit_code_for(ErrorCode code) {
  return code == ErrorCode::InvalidSpec ? kConfigError : kDataError;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("dsl");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("DSL_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to "off"
    if (level != spdlog::level::off || std::string(env) == "off") spdlog::set_level(level);
  }
}

// Writes next to the target and renames, so a failed run never leaves a partial file.
void write_atomically(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  write_text_file(tmp, text);
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::IoError, "cannot write " + path);
  }
}

struct RunConfig {
  std::string dataset;
  std::string blobs;
  std::string label_col;
  std::string metric = "euclidean";
  std::string normalize = "none";
  std::uint64_t seed = 0;
  std::optional<std::size_t> budget;
  std::string trace;
  std::string snapshot;
  std::optional<std::size_t> auic_at;
};

Metric parse_metric(const std::string& text, std::uint64_t seed) {
  if (text == "euclidean") return Metric::euclidean();
  if (text == "cosine") return Metric::cosine();
  if (text == "random") return Metric::random(seed);
  if (text.rfind("matrix=", 0) == 0) {
    const std::string path = text.substr(7);
    if (path.empty()) throw CliError{kConfigError, "InvalidSpec", "matrix= needs a path"};
    return load_distance_matrix(path);
  }
  throw CliError{kConfigError, "InvalidSpec", "unknown metric '" + text + "'"};
}

int cmd_run(const RunConfig& c) {
  if (c.dataset.empty() == c.blobs.empty())
    throw CliError{kConfigError, "InvalidSpec", "give exactly one of --dataset or --blobs"};
  const auto norm = parse_normalization(c.normalize);
  std::shared_ptr<Dataset> ds;
  if (!c.blobs.empty()) {
    auto spec = parse_blob_spec(c.blobs, c.seed);
    ds = std::make_shared<Dataset>(generate_blobs(spec));
    normalize(*ds, norm);
  } else {
    if (c.label_col.empty())
      throw CliError{kConfigError, "InvalidSpec", "--dataset needs --label-col for the ground-truth oracle"};
    if (!std::filesystem::exists(c.dataset))
      throw CliError{kDataError, "IoError", "dataset " + c.dataset + " does not exist"};
    CsvOptions o;
    o.normalize = norm;
    const bool numeric = !c.label_col.empty() &&
                         c.label_col.find_first_not_of("0123456789") == std::string::npos;
    if (numeric) {
      o.label_column = static_cast<std::size_t>(std::stoul(c.label_col));
    } else {
      o.label_column = c.label_col;
    }
    ds = std::make_shared<Dataset>(load_csv(c.dataset, o));
  }
  const Metric metric = parse_metric(c.metric, c.seed);
  spdlog::info("dataset: n={} d={} k={}", ds->size(), ds->dims(), ds->class_count());

  const auto t0 = Clock::now();
  SessionOptions so;
  so.seed = c.seed;
  so.budget = c.budget;
  Session session(ds, metric, so);
  const double init_s = seconds_since(t0);
  const RunResult r = session.run();
  const double total_s = seconds_since(t0);

  const std::size_t auic_n = c.auic_at.value_or(ds->size());
  const double area = auic(r.trace, auic_n);

  if (!c.trace.empty()) write_atomically(c.trace, r.trace.to_csv());
  if (!c.snapshot.empty()) write_atomically(c.snapshot, export_snapshot(session).dump(2) + "\n");

  std::printf("n: %zu  d: %zu  classes: %zu\n", ds->size(), ds->dims(), ds->class_count());
  std::printf("final ARI: %.6f\n", *r.final_ari);
  std::printf("queries: %zu\n", r.queries);
  std::printf("steps: %zu\n", r.steps);
  std::printf("clusters: %zu\n", session.cluster_count());
  std::printf("lambda: %.6f\n", *r.lambda);
  std::printf("query bound (1+lambda*k)n: %.1f (%s)\n", *r.query_bound,
              r.within_bound ? "within" : "EXCEEDED");
  std::printf("AUIC@%zu: %.3f\n", auic_n, area);
  std::printf("stop: %s\n", std::string(to_string(r.reason)).c_str());
  std::printf("wall-clock: %.3f s (ds_init %.3f s)\n", total_s, init_s);
  return 0;
}

int cmd_bench(const std::vector<std::size_t>& sizes, std::size_t k, std::uint64_t seed, bool init_only) {
  std::vector<double> ns, init_times, run_times;
  std::printf("%10s %12s %12s %10s %8s\n", "n", "ds_init_s", "run_s", "queries", "ARI");
  for (std::size_t n : sizes) {
    auto ds = std::make_shared<Dataset>(generate_blobs({n, std::min(k, n), 2, 1.0, seed}));
    const auto t0 = Clock::now();
    auto skeleton = ds_init(*ds, Metric::euclidean(), seed);
    const double ti = seconds_since(t0);
    ns.push_back(static_cast<double>(n));
    init_times.push_back(ti);
    if (init_only) {
      std::printf("%10zu %12.4f %12s %10s %8s\n", n, ti, "-", "-", "-");
      continue;
    }
    const auto t1 = Clock::now();
    SessionOptions so;
    so.seed = seed;
    Session s(ds, Metric::euclidean(), std::move(skeleton), so);
    const auto r = s.run();
    const double tr = ti + seconds_since(t1);
    run_times.push_back(tr);
    std::printf("%10zu %12.4f %12.4f %10zu %8.4f\n", n, ti, tr, r.queries, *r.final_ari);
  }
  if (ns.size() < 2) {
    std::printf("slope: omitted (needs at least two sizes)\n");
    return 0;
  }
  std::printf("ds_init log-log slope: %.3f\n", loglog_slope(ns, init_times));
  if (!init_only) std::printf("full run log-log slope: %.3f\n", loglog_slope(ns, run_times));
  return 0;
}

int cmd_serve(const std::string& bind, const ServiceOptions& options) {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos)
    throw CliError{kConfigError, "InvalidSpec", "--bind must be HOST:PORT"};
  const std::string host = bind.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(bind.substr(colon + 1));
  } catch (const std::exception&) {
    throw CliError{kConfigError, "InvalidSpec", "bad port in --bind"};
  }
  if (port < 0 || port > 65535) throw CliError{kConfigError, "InvalidSpec", "bad port in --bind"};
  if (!options.registry_dir.empty() && !std::filesystem::is_directory(options.registry_dir))
    throw CliError{kConfigError, "InvalidSpec", "registry " + options.registry_dir + " is not a directory"};

  // Signals are taken synchronously by a watcher thread; every other thread blocks them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  Service service(options);
  if (!service.bind(host, port))
    throw CliError{kPortInUse, "AddressInUse", "cannot bind " + bind};
  std::printf("listening on %s:%d\n", host.c_str(), service.port());
  std::fflush(stdout);
  std::thread watcher([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    spdlog::info("signal {}, stopping", sig);
    service.stop();
  });
  watcher.detach();
  service.serve();
  service.shutdown();
  return 0;
}

}  // namespace

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

int cli_main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Active clustering with pairwise constraints over a data skeleton"};
  app.require_subcommand(1);

  RunConfig rc;
  auto* run = app.add_subcommand("run", "headless run with the ground-truth oracle");
  run->add_option("--dataset", rc.dataset, "CSV file with a header row");
  run->add_option("--blobs", rc.blobs, "synthetic blobs: n=..,k=..,d=..[,spread=..][,seed=..]");
  run->add_option("--label-col", rc.label_col, "label column name or zero-based index");
  run->add_option("--metric", rc.metric, "euclidean | cosine | random | matrix=PATH")->capture_default_str();
  run->add_option("--normalize", rc.normalize, "none | minmax | zscore")->capture_default_str();
  run->add_option("--seed", rc.seed, "seed for ties, blobs and the random metric")->capture_default_str();
  run->add_option("--budget", rc.budget, "stop starting steps after this many queries");
  run->add_option("--trace", rc.trace, "write the ICE trace CSV here");
  run->add_option("--snapshot", rc.snapshot, "write the final snapshot JSON here");
  run->add_option("--auic-at", rc.auic_at, "AUIC horizon (default n)");

  std::vector<std::size_t> sizes;
  std::size_t bench_k = 10;
  std::uint64_t bench_seed = 0;
  bool init_only = false;
  auto* bench = app.add_subcommand("bench", "scaling report on 2-D blobs");
  bench->add_option("--sizes", sizes, "comma separated sizes")->required()->delimiter(',');
  bench->add_option("--k", bench_k, "clusters per dataset")->capture_default_str();
  bench->add_option("--seed", bench_seed)->capture_default_str();
  bench->add_flag("--init-only", init_only, "time ds_init only");

  std::string bind = "127.0.0.1:8080";
  ServiceOptions so;
  std::string persist, static_dir;
  auto* serve = app.add_subcommand("serve", "HTTP service for interactive sessions");
  serve->add_option("--bind", bind, "HOST:PORT")->capture_default_str();
  serve->add_option("--registry", so.registry_dir, "directory of dataset CSV files");
  serve->add_option("--persist", persist, "save sessions here on shutdown, reload on start");
  serve->add_option("--static", static_dir, "serve a web UI from this directory");
  serve->add_option("--async-threshold", so.async_threshold, "build larger sessions in the background")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report({kConfigError, "InvalidArguments", e.what()});
  }

  try {
    if (*run) return cmd_run(rc);
    if (*bench) return cmd_bench(sizes, bench_k, bench_seed, init_only);
    if (!persist.empty()) so.persist_dir = persist;
    if (!static_dir.empty()) so.static_dir = static_dir;
    return cmd_serve(bind, so);
  } catch (const CliError& e) {
    return report(e);
  } catch (const Error& e) {
    return report({exit_code_for(e.code()), std::string(to_string(e.code())), e.what()});
  } catch (const std::exception& e) {
    return report({1, "Internal", e.what()});
  }
}

}  // namespace dsl
