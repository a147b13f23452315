#pragma once

#include <cstdint>
#include <random>

namespace dcm {

using rng_type = std::mt19937_64;

// splitmix64 finalizer; used to derive statistically independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t stream_index) noexcept {
    return mix64(mix64(master_seed) ^ mix64(stream_index + 0x632be59bd9b4e019ULL));
}

/// Stream-independent purposes share the master seed but not the stream index space.
enum class stream_purpose : std::uint64_t {
    replica = 0,
    initial_condition = 1ULL << 62,
    diagnostics = 2ULL << 62,
};

inline rng_type make_stream(std::uint64_t master_seed, std::uint64_t index,
                            stream_purpose purpose = stream_purpose::replica) {
    return rng_type(stream_seed(master_seed, index | static_cast<std::uint64_t>(purpose)));
}

/// Uniform integer in [0, n). n must be positive.
template <class URBG>
inline std::uint64_t uniform_below(URBG& gen, std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(gen);
}

}  // namespace dcm
