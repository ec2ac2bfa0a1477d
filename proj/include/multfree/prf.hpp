#pragma once

// Keyed counter-based pseudorandom function used for membership sampling.
//
// u(seed, trial, v) = top 53 bits of mix64(trial_key(seed, trial) ^ mix64(v + kStream))
//
// mix64 is the splitmix64 finalizer (Stafford "Mix13" constants). The output
// is a pure function of its arguments, so membership can be evaluated in any
// order on any thread. Changing any constant here changes every sample.

#include <cstdint>

namespace multfree::prf {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
inline constexpr std::uint64_t kSeedSalt = 0xD1B54A32D192ED03ULL;
inline constexpr std::uint64_t kStream = 0x8BB84B93962EACC9ULL;

[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

[[nodiscard]] constexpr std::uint64_t trial_key(std::uint64_t seed, std::uint64_t trial) noexcept {
    return mix64(mix64(seed ^ kSeedSalt) + (trial + 1) * kGolden);
}

// 53-bit integer in [0, 2^53).
[[nodiscard]] constexpr std::uint64_t bits53(std::uint64_t key, std::uint64_t v) noexcept {
    return mix64(key ^ mix64(v + kStream)) >> 11;
}

// Uniform double in [0, 1).
[[nodiscard]] constexpr double uniform(std::uint64_t key, std::uint64_t v) noexcept {
    return static_cast<double>(bits53(key, v)) * 0x1p-53;
}

}  // namespace multfree::prf
