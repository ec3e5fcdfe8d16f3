#pragma once

// Brute-force counts over a prime sieve: representations n = p + 2^a (and
// with k powers of two), densities of representable n, Goldbach pair counts,
// prime pairs at a fixed gap, and explicit two-powers Linnik witnesses.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "powerslab/constants.hpp"
#include "powerslab/interval.hpp"
#include "powerslab/primes.hpp"

namespace powerslab {

namespace detail {

inline void require_sieve(const PrimeSieve& sieve, std::uint64_t n, const char* who) {
    if (sieve.limit() < n) {
        throw std::invalid_argument(std::string(who) + ": sieve limit below the queried range");
    }
}

// Exponent multisets a_1 <= ... <= a_k with sum 2^{a_i} < n, counting primes n - sum.
inline std::uint64_t count_power_multisets(std::uint64_t rest, int k, int min_a, const PrimeSieve& sieve) {
    if (k == 0) return sieve.is_prime(rest) ? 1 : 0;
    std::uint64_t total = 0;
    for (int a = min_a; a < 64; ++a) {
        const std::uint64_t pw = std::uint64_t{1} << a;
        // the remaining k-1 powers are each >= pw, and p >= 2
        if (pw > rest || rest - pw < static_cast<std::uint64_t>(k - 1) * pw + 2) break;
        total += count_power_multisets(rest - pw, k - 1, a, sieve);
    }
    return total;
}

// Bitset over [0, n]; bit i set iff i is in the set.
class BitSet {
public:
    explicit BitSet(std::uint64_t n) : n_(n), words_(static_cast<std::size_t>(n / 64 + 1), 0) {}

    void set(std::uint64_t i) { words_[static_cast<std::size_t>(i / 64)] |= std::uint64_t{1} << (i % 64); }
    [[nodiscard]] bool test(std::uint64_t i) const {
        return (words_[static_cast<std::size_t>(i / 64)] >> (i % 64)) & 1U;
    }
    [[nodiscard]] std::uint64_t size() const { return n_; }

    // this |= other << shift, truncated at n.
    void or_shifted(const BitSet& other, std::uint64_t shift) {
        const std::size_t ws = static_cast<std::size_t>(shift / 64);
        const unsigned bs = static_cast<unsigned>(shift % 64);
        for (std::size_t i = words_.size(); i-- > ws;) {
            const std::size_t src = i - ws;
            std::uint64_t v = other.words_[src] << bs;
            if (bs != 0 && src > 0) v |= other.words_[src - 1] >> (64 - bs);
            words_[i] |= v;
        }
        trim();
    }

    // Number of set bits in [0, upto].
    [[nodiscard]] std::uint64_t count_upto(std::uint64_t upto) const {
        upto = std::min(upto, n_);
        const std::size_t last = static_cast<std::size_t>(upto / 64);
        std::uint64_t c = 0;
        for (std::size_t i = 0; i < last; ++i) c += static_cast<std::uint64_t>(std::popcount(words_[i]));
        const unsigned shift = 63 - static_cast<unsigned>(upto % 64);
        return c + static_cast<std::uint64_t>(std::popcount(words_[last] << shift));
    }

private:
    void trim() {
        const unsigned tail = static_cast<unsigned>(n_ % 64);
        if (tail != 63) words_.back() &= (std::uint64_t{1} << (tail + 1)) - 1;
    }

    std::uint64_t n_;
    std::vector<std::uint64_t> words_;
};

}  // namespace detail

// Representations n = p + 2^{a_1} + ... + 2^{a_k}, exponents taken as a multiset.
inline std::uint64_t rep_count(std::uint64_t n, int k_powers, const PrimeSieve& sieve) {
    if (n < 2) {
        throw std::invalid_argument("rep_count: n must be at least 2");
    }
    if (k_powers < 1) {
        throw std::invalid_argument("rep_count: k_powers must be positive");
    }
    detail::require_sieve(sieve, n, "rep_count");
    return detail::count_power_multisets(n, k_powers, 0, sieve);
}

inline std::uint64_t rep_count(std::uint64_t n, const PrimeSieve& sieve) { return rep_count(n, 1, sieve); }

// Set of n <= N with at least one representation p + (k powers of two).
inline detail::BitSet representable_set(std::uint64_t N, int k_powers, const PrimeSieve& sieve) {
    if (k_powers < 1) {
        throw std::invalid_argument("representable_set: k_powers must be positive");
    }
    detail::require_sieve(sieve, N, "representable_set");
    detail::BitSet current(N);
    sieve.for_each_prime(2, N, [&](std::uint64_t p) { current.set(p); });
    for (int step = 0; step < k_powers; ++step) {
        detail::BitSet next(N);
        for (std::uint64_t pw = 1; pw <= N; pw <<= 1U) next.or_shifted(current, pw);
        current = std::move(next);
    }
    return current;
}

struct DensityPoint {
    std::uint64_t N = 0;
    std::uint64_t count = 0;
    double d = 0.0;
};

struct DensityProfile {
    std::uint64_t N = 0;
    int k_powers = 1;
    std::vector<DensityPoint> points;
};

// d_k(N_i) = #{n <= N_i : r_k(n) > 0} / N_i at each checkpoint (default: N).
inline DensityProfile density_profile(std::uint64_t N, int k_powers, std::vector<std::uint64_t> checkpoints,
                                      const PrimeSieve& sieve) {
    if (N < 4) {
        throw std::invalid_argument("density_profile: N must be at least 4");
    }
    if (checkpoints.empty()) checkpoints.push_back(N);
    std::sort(checkpoints.begin(), checkpoints.end());
    checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()), checkpoints.end());
    if (checkpoints.front() < 1 || checkpoints.back() > N) {
        throw std::invalid_argument("density_profile: checkpoints must lie in [1, N]");
    }
    const detail::BitSet rep = representable_set(N, k_powers, sieve);
    DensityProfile prof;
    prof.N = N;
    prof.k_powers = k_powers;
    for (std::uint64_t c : checkpoints) {
        const std::uint64_t count = rep.count_upto(c);
        prof.points.push_back({c, count, static_cast<double>(count) / static_cast<double>(c)});
    }
    return prof;
}

// Ordered pairs (p1, p2), 2 < p1, p2 < N, p1 + p2 = N.
inline std::uint64_t goldbach_G(std::uint64_t N, const PrimeSieve& sieve) {
    if (N % 2 != 0) {
        throw std::invalid_argument("goldbach_G: N must be even");
    }
    if (N <= 4) {
        throw std::invalid_argument("goldbach_G: N must exceed 4");
    }
    detail::require_sieve(sieve, N, "goldbach_G");
    std::uint64_t count = 0;
    sieve.for_each_prime(3, N - 3, [&](std::uint64_t p) {
        if (sieve.is_prime(N - p)) ++count;
    });
    return count;
}

// Pairs p1, p2 <= N with p1 - p2 = h and p2 = k (mod ell).
inline std::uint64_t gap_count(std::uint64_t N, std::uint64_t h, std::uint64_t k, std::uint64_t ell,
                               const PrimeSieve& sieve) {
    if (ell == 0) {
        throw std::invalid_argument("gap_count: modulus must be positive");
    }
    if (std::gcd(k, ell) != 1) {
        throw std::invalid_argument("gap_count: residue must be coprime to the modulus");
    }
    if (h >= N) {
        throw std::invalid_argument("gap_count: h must be below N");
    }
    detail::require_sieve(sieve, N, "gap_count");
    const std::uint64_t res = k % ell;
    std::uint64_t count = 0;
    sieve.for_each_prime(2, N - h, [&](std::uint64_t p2) {
        if (p2 % ell == res && sieve.is_prime(p2 + h)) ++count;
    });
    return count;
}

// G(N) (log N)^2 / (2 C0 N prod_{p | N, p > 2} (p-1)/(p-2)), C0 at its midpoint.
inline double hl_ratio(std::uint64_t N, const PrimeSieve& sieve, const Interval& C0) {
    const std::uint64_t G = goldbach_G(N, sieve);
    const double logN = std::log(static_cast<double>(N));
    const double weight = odd_prime_weight(factorize(N)).mid();
    return static_cast<double>(G) * logN * logN / (2.0 * C0.mid() * static_cast<double>(N) * weight);
}

struct K2Witness {
    std::uint64_t p1 = 0;
    std::uint64_t p2 = 0;
    int a1 = 0;
    int a2 = 0;
};

namespace detail {

// Some (p, a) with n = p + 2^a, smallest a first.
inline std::optional<std::pair<std::uint64_t, int>> split_prime_power(std::uint64_t n, const PrimeSieve& sieve) {
    for (int a = 0; a < 63 && (std::uint64_t{1} << a) < n; ++a) {
        const std::uint64_t p = n - (std::uint64_t{1} << a);
        if (sieve.is_prime(p)) return std::make_pair(p, a);
    }
    return std::nullopt;
}

}  // namespace detail

// n = p1 + p2 + 2^a1 + 2^a2 from an odd k < n with r(k) > 0 and r(n - k) > 0.
inline std::optional<K2Witness> verify_k2_decomposition(std::uint64_t n, const PrimeSieve& sieve) {
    if (n % 2 != 0 || n < 8) {
        throw std::invalid_argument("verify_k2_decomposition: n must be even and at least 8");
    }
    detail::require_sieve(sieve, n, "verify_k2_decomposition");
    for (std::uint64_t k = 3; k < n; k += 2) {
        const auto left = detail::split_prime_power(k, sieve);
        if (!left) continue;
        const auto right = detail::split_prime_power(n - k, sieve);
        if (!right) continue;
        return K2Witness{left->first, right->first, left->second, right->second};
    }
    return std::nullopt;
}

struct K2ScanResult {
    std::uint64_t checked = 0;
    std::vector<std::uint64_t> failures;
};

// Every even n in [lo, hi]; each witness is re-checked against the sieve.
inline K2ScanResult scan_k2_decompositions(std::uint64_t lo, std::uint64_t hi, const PrimeSieve& sieve) {
    if (lo < 8) lo = 8;
    if (lo % 2 != 0) ++lo;
    detail::require_sieve(sieve, hi, "scan_k2_decompositions");
    const detail::BitSet rep = representable_set(hi, 1, sieve);
    K2ScanResult out;
    for (std::uint64_t n = lo; n <= hi; n += 2) {
        ++out.checked;
        bool found = false;
        for (std::uint64_t k = 3; k < n; k += 2) {
            if (!rep.test(k) || !rep.test(n - k)) continue;
            const auto left = detail::split_prime_power(k, sieve);
            const auto right = detail::split_prime_power(n - k, sieve);
            if (left && right &&
                left->first + right->first + (std::uint64_t{1} << left->second) + (std::uint64_t{1} << right->second) == n) {
                found = true;
            }
            break;
        }
        if (!found) out.failures.push_back(n);
    }
    return out;
}

}  // namespace powerslab
