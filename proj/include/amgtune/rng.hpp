#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace amgtune {

/// Deterministic 64-bit generator (splitmix64 core). Used everywhere a seed
/// appears so that results are reproducible independent of the platform's
/// standard-library distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n) {
        // modulo bias is negligible for n << 2^64 and keeps the stream simple
        return n == 0 ? 0 : next_u64() % n;
    }

    /// Standard normal via Box-Muller (single value, deterministic stream use).
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        constexpr double two_pi = 6.283185307179586476925286766559;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

private:
    std::uint64_t state_;
};

/// FNV-1a hash of a string; stable across platforms and builds, used to derive
/// per-problem seeds from a global seed and a problem id.
inline std::uint64_t stable_hash(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag) {
    std::uint64_t h = stable_hash(tag);
    // one splitmix step mixes base and tag
    Rng r(base ^ (h + 0x9e3779b97f4a7c15ULL));
    return r.next_u64();
}

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.uniform_index(i));
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace amgtune
