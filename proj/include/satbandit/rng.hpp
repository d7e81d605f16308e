#pragma once
/*
Seeded random streams.

Every replication owns independent streams for observation noise, policy
randomization, instance sampling and estimator coins. Stream seeds come from
derive_seed(master, label, replication):

    h    = FNV-1a-64(label)
    base = mix64(master ^ h)
    seed = mix64(base + replication * 0x9E3779B97F4A7C15)

where mix64 is the splitmix64 finalizer. For a fixed (master, label), the map
replication -> seed is a bijection, so replications never share a stream.

Golden vector: derive_seed(0, "noise", 0) == 0x4FE52AF7462EBBD5
(asserted in tests/test_rng.cpp).
*/

#include <cstdint>
#include <random>
#include <string_view>

namespace satbandit {

inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view stream_label,
                                           std::uint64_t replication) noexcept {
    const std::uint64_t base = mix64(master_seed ^ fnv1a64(stream_label));
    return mix64(base + replication * 0x9E3779B97F4A7C15ULL);
}

/// Single-owner random stream. Not thread-safe; never share across replications.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    /// Standard normal draw.
    double normal() { return normal_(engine_); }

    /// Uniform index in [0, n). n must be positive.
    std::size_t uniform_index(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
    }

    /// Fair coin.
    bool coin() { return (engine_() >> 63) != 0; }

    /// Restart the stream from its seed.
    void reseed() {
        engine_.seed(seed_);
        normal_.reset();
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace satbandit
