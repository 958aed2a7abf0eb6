#pragma once

#include <cstdint>
#include <random>

#include "korovkin/vec.hpp"

namespace korovkin {

// Seeded RNG wrapper. Doubles are derived from raw 64-bit draws so the
// stream does not depend on library distribution internals.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // uniform in [0,1)
  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [0, n)
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

  Vec point(const Vec& lo, const Vec& hi) {
    Vec p(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) p[i] = uniform(lo[i], hi[i]);
    return p;
  }

private:
  std::mt19937_64 gen_;
};

}  // namespace korovkin
