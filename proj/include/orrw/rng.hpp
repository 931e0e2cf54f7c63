#pragma once

#include <cstdint>

namespace orrw {

// SplitMix64 (Steele, Lea & Flood; fixed-increment variant by Vigna).
// 64 bits of state, passes BigCrush, and trivially portable: the sequence
// for a given seed is identical on every platform, which is what makes the
// simulation outputs reproducible across machines and languages.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1), 53 random mantissa bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Seed of the RNG stream used by replicate `index` of a run with the given
// master seed.  Equal to the (index+1)-th output of SplitMix64(master): the
// master state is advanced index+1 increments in one jump and mixed once.
// Streams for distinct indices are therefore independent of how replicates
// are scheduled across workers.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace orrw
