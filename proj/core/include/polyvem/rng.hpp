#ifndef POLYVEM_RNG_HPP
#define POLYVEM_RNG_HPP

#include <cstdint>

namespace vem {

/// SplitMix64 generator. Small state, explicit seed, reproducible across
/// platforms; used everywhere randomness is needed so meshes are replayable.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

private:
  std::uint64_t state_;
};

}  // namespace vem

#endif
