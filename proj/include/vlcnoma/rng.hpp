#pragma once

#include <cmath>
#include <cstdint>

#include "vlcnoma/math.hpp"

namespace vlcnoma {

namespace detail {

inline uint64_t mix64(uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace detail

/// Counter-based random stream. A stream is fully determined by its key, so
/// any number of streams can run concurrently and reproduce bit-identical
/// sequences regardless of execution order.
class RandomStream {
public:
    explicit RandomStream(uint64_t key) : key_(key) {}

    /// Derive a key from structured identifiers (seed, point, block, lane).
    static uint64_t derive_key(uint64_t seed, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
        uint64_t k = detail::mix64(seed ^ 0xA5A5A5A55A5A5A5AULL);
        k = detail::mix64(k ^ detail::mix64(a + 0x1ULL));
        k = detail::mix64(k ^ detail::mix64(b + 0x2ULL));
        k = detail::mix64(k ^ detail::mix64(c + 0x3ULL));
        return k;
    }

    uint64_t next_u64() { return detail::mix64(key_ ^ detail::mix64(counter_++)); }

    /// Uniform in [0, 1) with 53 random bits.
    double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform bit.
    int next_bit() { return static_cast<int>(next_u64() >> 63); }

    /// Standard normal via Box-Muller (one value per call; pair cached).
    double next_gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_uniform();
        while (u1 <= 0.0) u1 = next_uniform();
        double u2 = next_uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * kPi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    uint64_t key_;
    uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace vlcnoma
