#pragma once

#include <cstdint>

namespace flowaug {

// Counter-based splittable generator (splitmix64 core). A run is reproducible
// from one 64-bit seed; every recursive call derives its own stream from
// (state, label) so trial-level parallelism stays deterministic.
struct SplitRng {
  std::uint64_t state;

  explicit SplitRng(std::uint64_t seed = 0) : state(seed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Unbiased enough for branching purposes at our ranges.
  std::uint64_t next_below(std::uint64_t n) { return n <= 1 ? 0 : next() % n; }

  bool coin() { return (next() & 1) != 0; }

  // True with probability num/den.
  bool chance(std::uint64_t num, std::uint64_t den) { return next() % den < num; }

  // Independent child stream labelled by `label`.
  SplitRng split(std::uint64_t label) const {
    return SplitRng(mix(state ^ (0xd1342543de82ef95ULL * (label + 1))));
  }
};

}  // namespace flowaug
