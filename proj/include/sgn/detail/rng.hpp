#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace sgn::detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xCBF29CE484222325ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2));
    return splitmix64(s);
}

// Deterministic generator. mt19937_64 output is pinned by the standard and
// std distributions are not, so bounded draws are done by hand.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, 1) with 53 bits of mantissa.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform in [0, n), unbiased by rejection. n must be > 0.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

    // Knuth's product method; fine for the small per-tick means used here.
    std::int64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        const double threshold = std::exp(-mean);
        std::int64_t k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= unit();
        } while (p > threshold);
        return k - 1;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace sgn::detail
