#pragma once

#include <cstdint>
#include <random>

#include "dsl/types.hpp"

namespace dsl {

/// SplitMix64 finalizer. Used as a stateless pair hash.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Maps 64 random bits to a double strictly inside (0, 1).
constexpr double to_open_unit(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

// std::mt19937_64 is bit-exact across standard libraries; the standard
// distributions are not, so all sampling goes through the raw engine.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform() { return to_open_unit(engine_()); }
  bool coin() { return (engine_() >> 63) != 0; }
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Resolves in-degree ties: seed 0 picks the lower id, otherwise a coin flip.
class TieBreaker {
 public:
  explicit TieBreaker(std::uint64_t seed) : seeded_(seed != 0), rng_(seed) {}

  NodeId pick(NodeId a, NodeId b) {
    if (!seeded_) return a < b ? a : b;
    return rng_.coin() ? a : b;
  }

 private:
  bool seeded_;
  Rng rng_;
};

}  // namespace dsl
