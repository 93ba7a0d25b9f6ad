#pragma once

// Reference implementations used as oracles. They are deliberately naive:
// quadratic or cubic loops with no shared code from the library.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "dsl/dataset.hpp"
#include "dsl/random.hpp"
#include "dsl/skeleton.hpp"
#include "dsl/types.hpp"

namespace testing {

inline std::shared_ptr<dsl::Dataset> line_dataset(const std::vector<double>& xs,
                                                  std::vector<int> labels = {}) {
  auto ds = std::make_shared<dsl::Dataset>(xs.size(), 1, xs);
  if (!labels.empty()) ds->set_labels(std::move(labels));
  return ds;
}

struct Weighted {
  std::size_t a, b;
  int w;
};

// All-pairs minimum theta-sum; -1 for unreachable.
inline std::vector<std::vector<long>> floyd_warshall(std::size_t n, const std::vector<Weighted>& edges) {
  constexpr long inf = std::numeric_limits<long>::max() / 4;
  std::vector<std::vector<long>> d(n, std::vector<long>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : edges) {
    d[e.a][e.b] = std::min<long>(d[e.a][e.b], e.w);
    d[e.b][e.a] = std::min<long>(d[e.b][e.a], e.w);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  for (auto& row : d)
    for (auto& v : row)
      if (v >= inf) v = -1;
  return d;
}

enum class Entailed { Same, Apart, Unknown };

// Fixpoint closure of the two inference rules on an explicit pair matrix:
// ML(a,b) & ML(b,c) -> ML(a,c);  ML(a,b) & CL(b,c) -> CL(a,c).
inline std::vector<std::vector<Entailed>> entailment_closure(
    std::size_t n, const std::vector<std::pair<std::pair<std::size_t, std::size_t>, dsl::Theta>>& cs) {
  std::vector<std::vector<Entailed>> r(n, std::vector<Entailed>(n, Entailed::Unknown));
  for (std::size_t i = 0; i < n; ++i) r[i][i] = Entailed::Same;
  for (const auto& [p, t] : cs) {
    const auto v = t == dsl::Theta::MustLink ? Entailed::Same : Entailed::Apart;
    r[p.first][p.second] = v;
    r[p.second][p.first] = v;
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        if (r[a][b] != Entailed::Same) continue;
        for (std::size_t c = 0; c < n; ++c) {
          if (r[b][c] == Entailed::Unknown || r[a][c] != Entailed::Unknown) continue;
          r[a][c] = r[b][c];
          r[c][a] = r[b][c];
          changed = true;
        }
      }
  }
  return r;
}

// Rand-index pair enumeration.
inline double naive_ari(const std::vector<int>& a, const std::vector<int>& b) {
  const std::size_t n = a.size();
  double both = 0, sa = 0, sb = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool x = a[i] == a[j];
      const bool y = b[i] == b[j];
      both += x && y;
      sa += x;
      sb += y;
    }
  const double pairs = static_cast<double>(n) * (n - 1) / 2.0;
  const double expected = pairs == 0 ? 0 : sa * sb / pairs;
  const double max = (sa + sb) / 2.0;
  if (max == expected) return (both == sa && both == sb) ? 1.0 : 0.0;
  return (both - expected) / (max - expected);
}

// Component ids by depth-first search, numbered by smallest member.
inline std::vector<int> dfs_components(const dsl::DataSkeleton& s) {
  const std::size_t n = s.node_count();
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& e : s.edges()) {
    adj[e.source].push_back(e.target);
    adj[e.target].push_back(e.source);
  }
  std::vector<int> out(n, -1);
  int next = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (out[v] >= 0) continue;
    std::vector<std::size_t> stack{v};
    out[v] = next;
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (auto w : adj[u])
        if (out[w] < 0) {
          out[w] = next;
          stack.push_back(w);
        }
    }
    ++next;
  }
  return out;
}

inline bool has_cycle(const dsl::DataSkeleton& s) {
  for (std::size_t v = 0; v < s.node_count(); ++v) {
    std::size_t hops = 0;
    auto cur = static_cast<dsl::NodeId>(v);
    while (const auto& e = s.out_edge(cur)) {
      cur = e->target;
      if (++hops > s.node_count()) return true;
    }
  }
  return false;
}

inline std::shared_ptr<dsl::Dataset> random_points(std::size_t n, std::size_t d, std::uint64_t seed,
                                                   int classes = 0) {
  dsl::Rng rng(seed);
  std::vector<double> v(n * d);
  for (auto& x : v) x = rng.uniform() * 100.0;
  auto ds = std::make_shared<dsl::Dataset>(n, d, std::move(v));
  if (classes > 0) {
    std::vector<int> labels(n);
    for (auto& l : labels) l = static_cast<int>(rng.next() % static_cast<std::uint64_t>(classes));
    ds->set_labels(std::move(labels));
  }
  return ds;
}

}  // namespace testing
