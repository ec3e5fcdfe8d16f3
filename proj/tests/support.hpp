#pragma once

// Seeded generators for the property tests.

#include <cstdint>
#include <vector>

namespace powerslab::props {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [lo, hi].
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi) {
        const std::uint64_t span = hi - lo + 1;
        return span == 0 ? next() : lo + next() % span;
    }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Finite double of moderate magnitude, either sign, random mantissa bits.
    double real(double scale = 1e6) {
        const double x = (unit() * 2.0 - 1.0) * scale;
        return next() % 8 == 0 ? x * 1e-9 : x;
    }

private:
    std::uint64_t state_;
};

inline std::vector<std::uint64_t> simple_primes(std::uint64_t limit) {
    std::vector<bool> composite(limit + 1, false);
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
}

inline bool trial_is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

}  // namespace powerslab::props
