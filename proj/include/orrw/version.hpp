#pragma once

#include <cstdint>

namespace orrw {

inline constexpr const char* kVersion = "1.0.0";

// Identifier of the PRNG used for all stochastic output.  Recorded in CSV
// metadata so that a reimplementation in another language can reproduce
// paths bit-exactly.
inline constexpr const char* kRngId = "splitmix64";

// Seed used when neither --seed nor the ORRW_SEED environment variable is
// given.
inline constexpr std::uint64_t kDefaultSeed = 42;

}  // namespace orrw
