#pragma once
// Counter-based random streams. Every draw is addressed by a
// (master_seed, replication, round, kind, idx) key, so replications and
// rounds can be evaluated in any order and still reproduce bit-identically.

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace mnlx {

enum class DrawKind : std::uint64_t {
  EntrantWeight = 1,
  Choice = 2,
  TsSample = 3,
  Review = 4,
  NoisyWeight = 5,
  Generic = 6,
};

struct RngKey {
  std::uint64_t master = 0;
  std::uint64_t replication = 0;
  std::uint64_t round = 0;
  std::uint64_t kind = static_cast<std::uint64_t>(DrawKind::Generic);
  std::uint64_t idx = 0;
};

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t key_hash(const RngKey& k) {
  std::uint64_t h = mix64(k.master);
  h = mix64(h ^ k.replication);
  h = mix64(h ^ k.round);
  h = mix64(h ^ k.kind);
  h = mix64(h ^ k.idx);
  return h;
}

// Stateful splitmix64 stream seeded from a key. Cheap to construct; a fresh
// stream per key keeps draws independent across keys.
class KeyedRng {
 public:
  explicit KeyedRng(const RngKey& key) : state_(key_hash(key)) {}
  explicit KeyedRng(std::uint64_t seed) : state_(mix64(seed)) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double next_normal() {
    double u1 = next_unit();
    double u2 = next_unit();
    while (u1 <= 0.0) u1 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  // Marsaglia-Tsang; shape < 1 boosted via the U^(1/a) trick.
  double next_gamma(double shape) {
    if (!(shape > 0.0)) throw std::invalid_argument("gamma shape must be positive");
    if (shape < 1.0) {
      double u = next_unit();
      while (u <= 0.0) u = next_unit();
      return next_gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = next_normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      double u = next_unit();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double next_beta(double a, double b) {
    double x = next_gamma(a);
    double y = next_gamma(b);
    return x / (x + y);
  }

 private:
  std::uint64_t state_;
};

inline double uniform_at(const RngKey& key) {
  return static_cast<double>(key_hash(key) >> 11) * 0x1.0p-53;
}

}  // namespace mnlx
