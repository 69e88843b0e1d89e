#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace linermoo {

// Deterministic RNG wrapper. All sampling is implemented on top of the raw
// 64-bit stream so that results are identical across standard libraries
// (std::uniform_*_distribution is implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }

    // Uniform in [0, 1).
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // Uniform integer in [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return lo + static_cast<std::int64_t>(eng_());
        // rejection sampling to avoid modulo bias
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return lo + static_cast<std::int64_t>(x % span);
    }

private:
    std::mt19937_64 eng_;
};

namespace detail {
inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
}  // namespace detail

// Named sub-stream of a master seed. Every source of randomness in the
// toolkit derives from one user-facing seed through these streams.
inline Rng sub_stream(std::uint64_t master_seed, std::string_view name) {
    return Rng(detail::splitmix64(master_seed ^ detail::fnv1a(name)));
}

}  // namespace linermoo
