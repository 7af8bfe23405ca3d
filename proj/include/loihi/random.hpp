#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace loihi {

/// SplitMix64 finalizer. Used to expand seeds and to mix substream keys.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// 64-bit FNV-1a over the bytes of `text`.
constexpr std::uint64_t fnv1a64(std::string_view text,
                                std::uint64_t hash = 0xCBF29CE484222325ULL) noexcept {
    for (const char c : text) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001B3ULL;
    }
    return hash;
}

/// Seed of the substream owned by (`entity`, `purpose`) under `master_seed`.
///
///   key = mix(mix(master_seed + golden) ^ fnv1a64(purpose)) ^ entity
///   seed = mix(key + golden)
///
/// where mix is the SplitMix64 finalizer and golden = 0x9E3779B97F4A7C15.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t entity,
                          std::string_view purpose) noexcept;

/// Deterministic uniform generator: xoshiro256** (Blackman and Vigna), state
/// filled from the seed by four SplitMix64 steps. The output sequence depends
/// only on the seed, never on the platform or standard library.
///
///   result = rotl(s1 * 5, 7) * 9
///   t = s1 << 17; s2 ^= s0; s3 ^= s1; s1 ^= s2; s0 ^= s3; s2 ^= t; s3 = rotl(s3, 45)
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed = 0) noexcept;

    /// Substream of `master_seed` for one entity and purpose.
    static RandomStream substream(std::uint64_t master_seed, std::uint64_t entity,
                                  std::string_view purpose) noexcept {
        return RandomStream(derive_seed(master_seed, entity, purpose));
    }

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() noexcept;

    /// Uniform real in [0, 1) with 53 random bits.
    double uniform() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Standard normal draw (Box-Muller, one value per call).
    double normal() noexcept;

    bool bernoulli(double p) noexcept { return uniform() < p; }

    /// Uniform integer in [lo, hi], inclusive; unbiased (rejection sampling).
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept;

private:
    std::uint64_t seed_;
    std::array<std::uint64_t, 4> state_{};
};

}  // namespace loihi
