#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "dsl/error.hpp"
#include "dsl/evaluation.hpp"
#include "dsl/random.hpp"
#include "support.hpp"

using namespace dsl;

namespace {

IceTrace trace_of(std::initializer_list<std::pair<std::size_t, double>> pts) {
  IceTrace t;
  for (auto [q, a] : pts) t.record({q, a, 1});
  return t;
}

}  // namespace

TEST_CASE("ARI examples") {
  const std::vector<int> a{0, 0, 1, 1};
  const std::vector<int> b{0, 1, 0, 1};
  CHECK(adjusted_rand_index(a, a) == 1.0);
  CHECK(std::abs(adjusted_rand_index(a, b) - (-0.5)) <= 1e-12);
  CHECK(std::abs(testing::naive_ari(a, b) - (-0.5)) <= 1e-12);
  const std::vector<int> c0{3, 3, 3};
  const std::vector<int> c1{7, 7, 7};
  CHECK(adjusted_rand_index(c0, c1) == 1.0);
  const std::vector<int> one{5};
  CHECK(adjusted_rand_index(one, one) == 1.0);
  // Degenerate: all singletons vs one block.
  const std::vector<int> sing{0, 1, 2};
  CHECK(adjusted_rand_index(sing, c0) == 0.0);
  CHECK(adjusted_rand_index(sing, sing) == 1.0);
  // Relabeling invariance.
  const std::vector<int> renamed{9, 9, 4, 4};
  CHECK(adjusted_rand_index(renamed, a) == 1.0);
}

TEST_CASE("ARI errors") {
  const std::vector<int> a{0, 1};
  const std::vector<int> b{0};
  const std::vector<int> empty;
  for (auto [x, y] : {std::pair(a, b), std::pair(empty, empty)}) {
    try {
      adjusted_rand_index(x, y);
      FAIL("expected LengthMismatch");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::LengthMismatch);
    }
  }
}

TEST_CASE("ARI agrees with pair enumeration") {
  Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng.next() % 80;
    const int ka = 1 + static_cast<int>(rng.next() % 6);
    const int kb = 1 + static_cast<int>(rng.next() % 6);
    std::vector<int> a(n), b(n);
    for (auto& x : a) x = static_cast<int>(rng.next() % ka);
    for (auto& x : b) x = static_cast<int>(rng.next() % kb);
    REQUIRE(std::abs(adjusted_rand_index(a, b) - testing::naive_ari(a, b)) <= 1e-12);
  }
}

TEST_CASE("ARI against random permutations is centered") {
  std::vector<int> base(100);
  for (std::size_t i = 0; i < 100; ++i) base[i] = static_cast<int>(i % 4);
  Rng rng(123);
  double sum = 0.0;
  for (int t = 0; t < 1000; ++t) {
    auto p = base;
    for (std::size_t k = p.size(); k > 1; --k) std::swap(p[k - 1], p[rng.next() % k]);
    sum += adjusted_rand_index(base, p);
  }
  CHECK(std::abs(sum / 1000.0) < 0.05);
}

TEST_CASE("AUIC examples") {
  CHECK(auic(trace_of({{0, 1.0}}), 17) == 1.0);
  CHECK(std::abs(auic(trace_of({{0, 0.0}, {1, 1.0}}), 1) - 0.5) <= 1e-12);
  CHECK(std::abs(auic(trace_of({{0, 0.0}, {1, 0.5}, {2, 1.0}}), 2) - 0.5) <= 1e-12);
  // Carry forward between samples: s = [0, 0, 0, 1].
  CHECK(std::abs(auic(trace_of({{0, 0.0}, {3, 1.0}}), 3) - 1.0 / 6.0) <= 1e-12);
  // Plateau padding: s = [0, 1, 1, 1].
  CHECK(std::abs(auic(trace_of({{0, 0.0}, {1, 1.0}}), 3) - 5.0 / 6.0) <= 1e-12);
  // Samples past n are ignored.
  CHECK(std::abs(auic(trace_of({{0, 0.0}, {1, 0.5}, {5, 1.0}}), 1) - 0.25) <= 1e-12);
}

TEST_CASE("AUIC errors") {
  try {
    auic(IceTrace{}, 3);
    FAIL("expected EmptyTrace");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyTrace);
  }
  IceTrace unlabeled;
  unlabeled.record({0, std::nullopt, 1});
  CHECK_THROWS_AS(auic(unlabeled, 3), Error);
}

TEST_CASE("AUIC is monotone under pointwise domination") {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    IceTrace lo, hi;
    std::size_t q = 0;
    for (int s = 0; s < 10; ++s) {
      const double v = rng.uniform() * 2.0 - 1.0;
      lo.record({q, v, 1});
      hi.record({q, std::min(1.0, v + rng.uniform() * 0.3), 1});
      q += 1 + rng.next() % 4;
    }
    const std::size_t n = 1 + rng.next() % 50;
    REQUIRE(auic(hi, n) >= auic(lo, n));
  }
}

TEST_CASE("trace invariants and csv") {
  IceTrace t;
  CHECK_THROWS(t.record({1, 0.0, 1}));
  t.record({0, -0.25, 4});
  t.record({1, std::nullopt, 3});
  CHECK_THROWS(t.record({1, 1.0, 2}));
  CHECK(t.to_csv() == "queries,ari\n0,-0.25\n1,\n");
}

TEST_CASE("erroneous edge rate") {
  DataSkeleton s(4);
  s.add_edge(1, 0, 1, false);
  s.add_edge(2, 0, 10, false);
  s.add_edge(3, 2, 1, false);
  const std::vector<int> same{0, 0, 0, 0};
  const std::vector<int> fixture{0, 0, 1, 1};
  const std::vector<int> alternating{0, 1, 1, 0};
  CHECK(erroneous_edge_rate(s, same) == 0.0);
  CHECK(std::abs(erroneous_edge_rate(s, fixture) - 1.0 / 3.0) <= 1e-12);
  CHECK(erroneous_edge_rate(s, alternating) == 1.0);
  const std::vector<int> short_labels{0};
  try {
    erroneous_edge_rate(s, short_labels);
    FAIL("expected MissingLabels");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingLabels);
  }
  CHECK(query_upper_bound(1.0 / 3.0, 2, 4) == doctest::Approx(20.0 / 3.0));
}

TEST_CASE("contingency tracker follows arbitrary detach and merge sequences") {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.next() % 60;
    DataSkeleton s(n);
    for (NodeId v = 1; v < n; ++v) {
      s.add_edge(v, static_cast<NodeId>(rng.next() % v), 1.0, false);
      s.erase_representative(v);
    }
    std::vector<int> labels(n);
    for (auto& l : labels) l = static_cast<int>(rng.next() % 3);
    ContingencyTracker tr(s, labels);
    for (int op = 0; op < 40; ++op) {
      if (rng.coin()) {
        const auto v = static_cast<NodeId>(rng.next() % n);
        if (!s.out_edge(v)) continue;
        s.remove_edge(v);
        tr.detach(s, v);
      } else {
        const auto& reps = s.representatives();
        std::vector<NodeId> roots;
        for (NodeId v = 0; v < n; ++v)
          if (!s.out_edge(v)) roots.push_back(v);
        if (roots.size() < 2) continue;
        const NodeId lo = roots[rng.next() % roots.size()];
        NodeId hi = roots[rng.next() % roots.size()];
        if (hi == lo) continue;
        (void)reps;
        tr.merge(s, lo, hi);
        s.add_edge(lo, hi, 1.0, true);
      }
      const auto comp = testing::dfs_components(s);
      REQUIRE(std::abs(tr.ari() - testing::naive_ari(comp, labels)) <= 1e-12);
      REQUIRE(tr.component_count() ==
              static_cast<std::size_t>(*std::max_element(comp.begin(), comp.end()) + 1));
    }
  }
}
