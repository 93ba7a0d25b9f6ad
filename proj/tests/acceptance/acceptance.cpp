// One line per acceptance criterion. Exit 0 when all pass, 77 when the only
// failures are missing external data, 1 otherwise.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dsl/engine.hpp"
#include "dsl/error.hpp"
#include "dsl/evaluation.hpp"
#include "dsl/ingestion.hpp"
#include "dsl/random.hpp"

#ifndef DSL_DATA_DIR
#define DSL_DATA_DIR "data"
#endif

using namespace dsl;

namespace {

// Pinned thresholds.
constexpr std::size_t kC1Runs = 50;
constexpr double kC1Seconds = 10.0;
constexpr std::size_t kC2RandomN = 100;
constexpr std::size_t kC2RandomK = 4;
constexpr std::size_t kC2RandomQueries = 500;
constexpr double kC3MinAri = 0.95;
constexpr std::size_t kC3WineBudget = 135;
constexpr std::size_t kC3BanknoteBudget = 225;
constexpr std::size_t kC4Trials = 200;
constexpr std::size_t kC5Trials = 1000;
constexpr std::size_t kC5MaxNodes = 12;
constexpr double kC7Tol = 1e-12;
constexpr std::size_t kC7Permutations = 1000;
constexpr double kC7MeanBound = 0.05;
constexpr double kC8TimeSlope = 1.3;
constexpr double kC8MemSlope = 1.1;
constexpr double kC8FullRunSeconds = 120.0;
constexpr int kC8Repeats = 3;
const std::vector<std::size_t> kC8Sizes{10000, 20000, 40000, 80000, 160000};

enum class Status { Pass, Fail, NoData };

struct Line {
  Status status;
  std::string detail;
};

std::map<int, Line> results;

void report(int id, const char* title, Status status, const std::string& detail) {
  const char* tag = status == Status::Pass ? "PASS" : "FAIL";
  std::printf("[%s] C%d %s: %s\n", tag, id, title, detail.c_str());
  std::fflush(stdout);
  results[id] = {status, detail};
}

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t m = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

std::shared_ptr<Dataset> blobs(std::size_t n, std::size_t k, std::size_t d, double spread,
                               std::uint64_t seed) {
  return std::make_shared<Dataset>(generate_blobs(BlobSpec{n, k, d, spread, seed}));
}

// Step-by-step headless run that also audits termination.
struct Audit {
  bool ok = true;
  std::string why;
  std::size_t steps = 0;
};

Audit audited_run(Session& s) {
  Audit a;
  const std::size_t n = s.dataset().size();
  for (;;) {
    const std::size_t before = s.skeleton().unconfirmed_count();
    const auto out = s.recons_step();
    if (out.kind == StepOutcome::Kind::AllConfirmed) {
      if (before != 0) {
        a.ok = false;
        a.why = "terminated with unconfirmed edges";
      }
      break;
    }
    ++a.steps;
    if (s.skeleton().unconfirmed_count() + 1 != before) {
      a.ok = false;
      a.why = fmt("unconfirmed went %zu -> %zu", before, s.skeleton().unconfirmed_count());
      break;
    }
    if (a.steps > n - 1) {
      a.ok = false;
      a.why = fmt("%zu steps on n=%zu", a.steps, n);
      break;
    }
  }
  return a;
}

// C1, C2, C6 share runs.
struct BlobRunStats {
  std::size_t perfect = 0;
  std::size_t within = 0;
  double seconds = 0;
  double worst_ratio = 0;
};

void criteria_1_2_6() {
  Rng rng(20240501);
  BlobRunStats st;
  std::vector<std::shared_ptr<Dataset>> sets;
  std::vector<std::uint64_t> seeds;
  for (std::size_t r = 0; r < kC1Runs; ++r) {
    const std::size_t n = 50 + rng.next() % 451;
    const std::size_t k = 2 + rng.next() % 7;
    const std::size_t d = 2 + rng.next() % 9;
    const double spread = 0.5 + 2.5 * rng.uniform();
    sets.push_back(blobs(n, k, d, spread, rng.next()));
    seeds.push_back(r % 5 == 0 ? 0 : rng.next());
  }

  std::vector<RunResult> runs;
  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t r = 0; r < kC1Runs; ++r) {
    Session s(sets[r], Metric::euclidean(), SessionOptions{seeds[r]});
    runs.push_back(s.run());
  }
  st.seconds = seconds_since(t0);
  for (std::size_t r = 0; r < kC1Runs; ++r) {
    const auto& res = runs[r];
    if (res.final_ari && *res.final_ari == 1.0) ++st.perfect;
    if (res.within_bound) ++st.within;
    st.worst_ratio = std::max(st.worst_ratio, static_cast<double>(res.queries) / *res.query_bound);
  }
  report(1, "perfect clustering", st.perfect == kC1Runs && st.seconds < kC1Seconds ? Status::Pass : Status::Fail,
         fmt("%zu/%zu runs end at ARI 1.0; %.2f s total (limit %.0f s)", st.perfect, kC1Runs, st.seconds,
             kC1Seconds));

  std::size_t random_ok = 0;
  std::size_t random_worst = 0;
  const std::vector<std::uint64_t> random_seeds{1, 2, 3, 4, 5};
  for (std::uint64_t seed : random_seeds) {
    Session s(blobs(kC2RandomN, kC2RandomK, 2, 1.0, seed), Metric::random(seed), SessionOptions{seed});
    const auto res = s.run();
    random_worst = std::max(random_worst, res.queries);
    if (*res.final_ari == 1.0 && res.queries <= kC2RandomQueries) ++random_ok;
  }
  const bool c2 = st.within == kC1Runs && random_ok == random_seeds.size();
  report(2, "query bound", c2 ? Status::Pass : Status::Fail,
         fmt("%zu/%zu blob runs within (1+lambda k)n (max ratio %.3f); random metric %zu/%zu at ARI 1.0, "
             "max %zu queries (limit %zu)",
             st.within, kC1Runs, st.worst_ratio, random_ok, random_seeds.size(), random_worst,
             kC2RandomQueries));

  // Termination audit: the blob runs again, random-metric runs, and runs
  // against noisy labels.
  std::size_t audited = 0;
  std::string failure;
  auto audit = [&](Session& s, const char* what) {
    const auto a = audited_run(s);
    ++audited;
    if (!a.ok && failure.empty()) failure = std::string(what) + ": " + a.why;
  };
  for (std::size_t r = 0; r < kC1Runs; ++r) {
    Session s(sets[r], Metric::euclidean(), SessionOptions{seeds[r]});
    audit(s, "blobs");
  }
  for (std::uint64_t seed : random_seeds) {
    Session s(blobs(kC2RandomN, kC2RandomK, 2, 1.0, seed), Metric::random(seed), SessionOptions{seed});
    audit(s, "random metric");
  }
  Rng noise(99);
  for (int t = 0; t < 20; ++t) {
    auto ds = blobs(60 + noise.next() % 200, 2 + noise.next() % 5, 2, 1.5, noise.next());
    auto labels = *ds->labels();
    for (auto& l : labels)
      if (noise.uniform() < 0.15) l = static_cast<int>(noise.next() % 6);
    ds->set_labels(labels);
    Session s(ds, t % 2 ? Metric::cosine() : Metric::euclidean(), SessionOptions{noise.next()});
    audit(s, "noisy labels");
  }
  report(6, "termination", failure.empty() ? Status::Pass : Status::Fail,
         failure.empty() ? fmt("%zu runs: steps <= n-1, each step removes exactly one unconfirmed edge", audited)
                         : failure);
}

std::optional<std::string> locate(const char* env, const char* file) {
  if (const char* p = std::getenv(env); p && *p) return std::filesystem::exists(p) ? std::optional(p) : std::nullopt;
  const std::string path = std::string(DSL_DATA_DIR) + "/" + file;
  if (std::filesystem::exists(path)) return path;
  return std::nullopt;
}

struct SoftTarget {
  std::optional<double> ari;
  std::size_t queries = 0;
  std::string error;
};

SoftTarget soft_target(const std::string& path, std::size_t budget) {
  SoftTarget out;
  try {
    CsvOptions o;
    o.label_column = ColumnRef{std::string("class")};
    o.normalize = Normalization::MinMax;
    auto ds = std::make_shared<Dataset>(load_csv(path, o));
    SessionOptions so;
    so.budget = budget;
    Session s(ds, Metric::euclidean(), so);
    const auto res = s.run();
    out.ari = res.final_ari;
    out.queries = res.queries;
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

void criterion_3() {
  std::vector<std::string> parts;
  bool pass = true;
  bool missing = false;
  auto check = [&](const char* name, const char* env, const char* file, std::size_t budget) {
    const auto path = locate(env, file);
    if (!path) {
      missing = true;
      parts.push_back(fmt("%s data unavailable (set %s or add %s/%s)", name, env, DSL_DATA_DIR, file));
      return;
    }
    const auto r = soft_target(*path, budget);
    if (!r.ari) {
      pass = false;
      parts.push_back(fmt("%s error: %s", name, r.error.c_str()));
      return;
    }
    if (*r.ari < kC3MinAri) pass = false;
    parts.push_back(fmt("%s ARI %.4f after %zu queries (need >= %.2f within %zu)", name, *r.ari, r.queries,
                        kC3MinAri, budget));
  };
  check("wine", "DSL_WINE_CSV", "wine.csv", kC3WineBudget);
  check("banknote", "DSL_BANKNOTE_CSV", "banknote.csv", kC3BanknoteBudget);
  std::string detail;
  for (const auto& p : parts) detail += (detail.empty() ? "" : "; ") + p;
  report(3, "real-data soft targets", !pass ? Status::Fail : missing ? Status::NoData : Status::Pass, detail);
}

std::string check_init_structure(const DataSkeleton& s) {
  const std::size_t n = s.node_count();
  if (s.edge_count() != n - 1) return fmt("%zu edges on n=%zu", s.edge_count(), n);
  if (s.representatives().size() != 1) return fmt("%zu representatives", s.representatives().size());
  std::vector<NodeId> roots;
  for (NodeId v = 0; v < n; ++v)
    if (!s.out_edge(v)) roots.push_back(v);
  if (roots.size() != 1) return fmt("%zu zero-out-degree nodes", roots.size());
  if (*s.representatives().begin() != roots[0]) return "representative is not the root";
  // Every node must reach the root by following out-edges within n hops.
  for (NodeId v = 0; v < n; ++v) {
    NodeId u = v;
    std::size_t hops = 0;
    while (s.out_edge(u) && hops <= n) {
      u = s.out_edge(u)->target;
      ++hops;
    }
    if (hops > n) return fmt("cycle through node %u", v);
  }
  return {};
}

void criterion_4() {
  std::string failure;
  // Golden fixture on the line {0, 1, 10, 11}.
  {
    auto ds = std::make_shared<Dataset>(4, 1, std::vector<double>{0, 1, 10, 11});
    const auto s = ds_init(*ds, Metric::euclidean());
    std::vector<std::tuple<NodeId, NodeId, double>> got;
    for (const auto& e : s.edges()) got.emplace_back(e.source, e.target, e.distance);
    const std::vector<std::tuple<NodeId, NodeId, double>> want{{1, 0, 1.0}, {2, 0, 10.0}, {3, 2, 1.0}};
    if (got != want || s.representatives() != std::set<NodeId>{0}) failure = "golden fixture mismatch";
  }
  Rng rng(4);
  for (std::size_t t = 0; t < kC4Trials && failure.empty(); ++t) {
    const std::size_t n = 2 + rng.next() % 400;
    const std::size_t d = 1 + rng.next() % 6;
    std::vector<double> v(n * d);
    for (auto& x : v) x = t % 5 == 0 ? static_cast<double>(rng.next() % 4) : rng.uniform() * 100.0;
    Dataset ds(n, d, std::move(v));
    const std::uint64_t seed = t % 3 == 0 ? 0 : rng.next();
    const Metric m = t % 4 == 1 ? Metric::random(seed) : t % 4 == 2 ? Metric::cosine() : Metric::euclidean();
    const auto why = check_init_structure(ds_init(ds, m, seed));
    if (!why.empty()) failure = fmt("trial %zu (n=%zu): %s", t, n, why.c_str());
  }
  report(4, "ds_init structure", failure.empty() ? Status::Pass : Status::Fail,
         failure.empty() ? fmt("%zu random datasets form one rooted tree; golden fixture matches", kC4Trials)
                         : failure);
}

// Must-link components by flood fill, then cannot-link between components.
struct EntailmentOracle {
  std::size_t n;
  std::vector<std::pair<std::pair<NodeId, NodeId>, Theta>> edges;

  std::optional<Theta> operator()(NodeId i, NodeId j) const {
    std::vector<int> comp(n, -1);
    int next = 0;
    for (NodeId s = 0; s < n; ++s) {
      if (comp[s] >= 0) continue;
      std::vector<NodeId> stack{s};
      comp[s] = next;
      while (!stack.empty()) {
        const NodeId u = stack.back();
        stack.pop_back();
        for (const auto& [e, t] : edges) {
          if (t != Theta::MustLink) continue;
          const NodeId w = e.first == u ? e.second : e.second == u ? e.first : u;
          if (w != u && comp[w] < 0) {
            comp[w] = next;
            stack.push_back(w);
          }
        }
      }
      ++next;
    }
    if (comp[i] == comp[j]) return Theta::MustLink;
    for (const auto& [e, t] : edges)
      if (t == Theta::CannotLink &&
          ((comp[e.first] == comp[i] && comp[e.second] == comp[j]) ||
           (comp[e.first] == comp[j] && comp[e.second] == comp[i])))
        return Theta::CannotLink;
    return std::nullopt;
  }
};

void criterion_5() {
  Rng rng(5);
  std::size_t disagreements = 0;
  std::size_t pairs = 0;
  for (std::size_t t = 0; t < kC5Trials; ++t) {
    const std::size_t n = 2 + rng.next() % (kC5MaxNodes - 1);
    MinimalConstraintGraph g(n);
    EntailmentOracle oracle{n, {}};
    const std::size_t attempts = rng.next() % (4 * n);
    for (std::size_t a = 0; a < attempts; ++a) {
      const auto i = static_cast<NodeId>(rng.next() % n);
      const auto j = static_cast<NodeId>(rng.next() % n);
      if (i == j || oracle(i, j)) continue;
      const Theta th = rng.uniform() < 0.45 ? Theta::MustLink : Theta::CannotLink;
      g.add_constraint({i, j, th});
      oracle.edges.push_back({{i, j}, th});
    }
    for (NodeId i = 0; i < n; ++i)
      for (NodeId j = 0; j < n; ++j) {
        if (i == j) continue;
        ++pairs;
        const auto want = oracle(i, j);
        const Verdict expect = !want ? Verdict::Unknown
                               : *want == Theta::MustLink ? Verdict::MustLink
                                                          : Verdict::CannotLink;
        if (deduce_verdict(g, i, j) != expect) ++disagreements;
      }
  }
  report(5, "deduction completeness", disagreements == 0 ? Status::Pass : Status::Fail,
         fmt("%zu disagreements over %zu ordered pairs in %zu graphs", disagreements, pairs, kC5Trials));
}

void criterion_7() {
  std::vector<std::string> bad;
  auto near = [&](const char* what, double got, double want) {
    if (!(std::abs(got - want) <= kC7Tol)) bad.push_back(fmt("%s: %.17g vs %.17g", what, got, want));
  };
  const std::vector<int> a{0, 0, 1, 1}, b{0, 1, 0, 1}, renamed{9, 9, 4, 4};
  const std::vector<int> c0{3, 3, 3}, c1{7, 7, 7}, sing{0, 1, 2}, one{5};
  near("ari identical", adjusted_rand_index(a, a), 1.0);
  near("ari crossed", adjusted_rand_index(a, b), -0.5);
  near("ari one block", adjusted_rand_index(c0, c1), 1.0);
  near("ari single item", adjusted_rand_index(one, one), 1.0);
  near("ari singletons vs block", adjusted_rand_index(sing, c0), 0.0);
  near("ari renamed", adjusted_rand_index(renamed, a), 1.0);

  auto trace = [](std::initializer_list<std::pair<std::size_t, double>> pts) {
    IceTrace t;
    for (auto [q, v] : pts) t.record({q, v, 1});
    return t;
  };
  near("auic constant", auic(trace({{0, 1.0}}), 17), 1.0);
  near("auic one step", auic(trace({{0, 0.0}, {1, 1.0}}), 1), 0.5);
  near("auic ramp", auic(trace({{0, 0.0}, {1, 0.5}, {2, 1.0}}), 2), 0.5);
  near("auic carry forward", auic(trace({{0, 0.0}, {3, 1.0}}), 3), 1.0 / 6.0);
  near("auic plateau", auic(trace({{0, 0.0}, {1, 1.0}}), 3), 5.0 / 6.0);
  near("auic truncated", auic(trace({{0, 0.0}, {1, 0.5}, {5, 1.0}}), 1), 0.25);

  DataSkeleton s(4);
  s.add_edge(1, 0, 1, false);
  s.add_edge(2, 0, 10, false);
  s.add_edge(3, 2, 1, false);
  near("lambda pure", erroneous_edge_rate(s, std::vector<int>{0, 0, 0, 0}), 0.0);
  near("lambda fixture", erroneous_edge_rate(s, std::vector<int>{0, 0, 1, 1}), 1.0 / 3.0);
  near("lambda alternating", erroneous_edge_rate(s, std::vector<int>{0, 1, 1, 0}), 1.0);
  near("bound fixture", query_upper_bound(1.0 / 3.0, 2, 4), 20.0 / 3.0);

  std::vector<int> base(200);
  for (std::size_t i = 0; i < base.size(); ++i) base[i] = static_cast<int>(i % 5);
  Rng rng(7);
  double sum = 0;
  for (std::size_t t = 0; t < kC7Permutations; ++t) {
    auto p = base;
    for (std::size_t k = p.size(); k > 1; --k) std::swap(p[k - 1], p[rng.next() % k]);
    sum += adjusted_rand_index(base, p);
  }
  const double mean = sum / static_cast<double>(kC7Permutations);
  if (!(std::abs(mean) < kC7MeanBound)) bad.push_back(fmt("permutation mean %.4f", mean));
  report(7, "ARI/AUIC numerics", bad.empty() ? Status::Pass : Status::Fail,
         bad.empty() ? fmt("all examples within %.0e; permutation mean %.5f over %zu trials", kC7Tol, mean,
                           kC7Permutations)
                     : bad.front());
}

void full_run(std::size_t n, std::size_t k) {
  Session s(blobs(n, k, 2, 1.0, 8), Metric::euclidean());
  s.run();
}

long own_peak_kib() {
  std::ifstream in("/proc/self/status");
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("VmHWM:", 0) == 0) return std::stol(line.substr(6));
  return -1;
}

// Peak resident set, in KiB, of a fresh process running a full run at n.
// n = 0 measures the process baseline. The child reports its own high-water
// mark since the kernel's rusage figure carries over the pre-exec image.
long child_peak_kib(std::size_t n) {
  const auto self = std::filesystem::read_symlink("/proc/self/exe").string();
  const std::string cmd = "'" + self + "' --full-run " + std::to_string(n);
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return -1;
  long kib = -1;
  if (std::fscanf(pipe, "%ld", &kib) != 1) kib = -1;
  return pclose(pipe) == 0 ? kib : -1;
}

void criterion_8() {
  std::vector<double> xs, init_s, mem;
  for (std::size_t n : kC8Sizes) {
    const auto ds = generate_blobs(BlobSpec{n, 10, 2, 1.0, 8});
    double best = 1e300;
    for (int r = 0; r < kC8Repeats; ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto s = ds_init(ds, Metric::euclidean());
      best = std::min(best, seconds_since(t0));
    }
    xs.push_back(static_cast<double>(n));
    init_s.push_back(best);
  }
  const double time_slope = fit_slope(xs, init_s);

  const long baseline = child_peak_kib(0);
  bool mem_ok = baseline >= 0;
  for (std::size_t n : kC8Sizes) {
    const long peak = child_peak_kib(n);
    if (peak < 0) mem_ok = false;
    mem.push_back(static_cast<double>(std::max(1L, peak - baseline)));
  }
  const double mem_slope = mem_ok ? fit_slope(xs, mem) : NAN;

  const auto t0 = std::chrono::steady_clock::now();
  full_run(100000, 10);
  const double full = seconds_since(t0);

  const bool pass = time_slope < kC8TimeSlope && mem_ok && mem_slope < kC8MemSlope && full < kC8FullRunSeconds;
  report(8, "scaling", pass ? Status::Pass : Status::Fail,
         fmt("ds_init slope %.3f (limit %.1f, %.3f s at %zu); peak memory slope %.3f (limit %.1f, %.1f MiB at "
             "%zu); full run n=100000 k=10 %.2f s (limit %.0f s)",
             time_slope, kC8TimeSlope, init_s.back(), kC8Sizes.back(), mem_slope, kC8MemSlope,
             mem.back() / 1024.0, kC8Sizes.back(), full, kC8FullRunSeconds));
}

// Interactive run answered from a fixed, partly wrong, answer source.
std::pair<std::string, std::string> replay(const std::shared_ptr<Dataset>& ds, const Metric& m,
                                           std::uint64_t seed) {
  const auto labels = *ds->labels();
  SessionOptions o;
  o.seed = seed;
  o.oracle = OracleMode::Interactive;
  Session s(ds, m, o);
  std::size_t asked = 0;
  while (s.drive() == StopReason::AwaitingAnswer) {
    const auto q = *s.pending();
    const bool same = labels[q.i] == labels[q.j];
    const bool flip = mix64(seed + asked++) % 11 == 0;
    s.resume_with_answer(same != flip ? Theta::MustLink : Theta::CannotLink);
  }
  return {s.trace().to_csv(), export_snapshot(s).dump()};
}

void criterion_9() {
  std::size_t checked = 0;
  std::string failure;
  const std::vector<std::uint64_t> seeds{0, 3, 17};
  for (std::uint64_t seed : seeds)
    for (int mk = 0; mk < 3; ++mk) {
      const auto ds = blobs(150, 3, 3, 1.5, seed + 100);
      const Metric m = mk == 0 ? Metric::euclidean() : mk == 1 ? Metric::cosine() : Metric::random(seed + 1);
      const auto first = replay(ds, m, seed);
      const auto second = replay(ds, m, seed);
      ++checked;
      if (first != second && failure.empty())
        failure = fmt("seed %llu metric %s differs", static_cast<unsigned long long>(seed), m.name().c_str());
    }
  report(9, "replay determinism", failure.empty() ? Status::Pass : Status::Fail,
         failure.empty() ? fmt("%zu configurations: trace CSV and snapshot JSON byte-identical across two runs",
                               checked)
                         : failure);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc == 3 && std::string(argv[1]) == "--full-run") {
    const std::size_t n = std::stoul(argv[2]);
    if (n > 0) full_run(n, 10);
    std::printf("%ld\n", own_peak_kib());
    return 0;
  }
  const std::vector<std::pair<int, std::function<void()>>> all{
      {1, criteria_1_2_6}, {3, criterion_3}, {4, criterion_4}, {5, criterion_5},
      {7, criterion_7},    {8, criterion_8}, {9, criterion_9}};
  for (const auto& [id, run] : all) {
    try {
      run();
    } catch (const std::exception& e) {
      report(id, "exception", Status::Fail, e.what());
    }
  }
  bool fail = false;
  bool nodata = false;
  for (const auto& [id, line] : results) {
    fail |= line.status == Status::Fail;
    nodata |= line.status == Status::NoData;
  }
  std::printf("%zu criteria: %s\n", results.size(),
              fail ? "failures present" : nodata ? "passed except for unavailable data" : "all passed");
  return fail ? 1 : nodata ? 77 : 0;
}
