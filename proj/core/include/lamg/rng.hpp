#pragma once

#include <cstdint>

namespace lamg {

// Deterministic xoshiro-style generator. std::uniform_real_distribution is
// not bit-reproducible across standard libraries, so the uniform draw is
// spelled out here; seeds map to identical streams on every platform.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {
    // splitmix warm-up decorrelates small consecutive seeds
    next_u64();
    next_u64();
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [-1, 1).
  double next_pm1() { return 2.0 * next_unit() - 1.0; }

  // Derive an independent stream, e.g. one per hierarchy level.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    Rng r(seed ^ (0xd1342543de82ef95ULL * (stream + 1)));
    return r.next_u64();
  }

private:
  std::uint64_t state_;
};

} // namespace lamg
