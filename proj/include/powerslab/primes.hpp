#pragma once

// Odd-only bit sieve of Eratosthenes, filled segment by segment so the
// working set stays cache sized. Read-only after construction, so one
// instance can be shared between threads.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace powerslab {

class PrimeSieve {
public:
    // Upper bound on `limit`; the odd-only table is then just under 64 MB.
    static constexpr std::uint64_t kMaxLimit = 1'000'000'000ULL;

    explicit PrimeSieve(std::uint64_t limit) : limit_(limit) {
        if (limit < 2) {
            throw std::invalid_argument("PrimeSieve: limit must be at least 2");
        }
        if (limit > kMaxLimit) {
            throw std::invalid_argument("PrimeSieve: limit exceeds supported range");
        }
        build();
    }

    [[nodiscard]] std::uint64_t limit() const { return limit_; }

    [[nodiscard]] bool is_prime(std::uint64_t n) const {
        if (n > limit_) {
            throw std::out_of_range("PrimeSieve: query above sieve limit");
        }
        if (n < 2) return false;
        if (n == 2) return true;
        if (n % 2 == 0) return false;
        const std::uint64_t i = n / 2;
        return (bits_[i / 64] >> (i % 64)) & 1U;
    }

    // pi(n) for n <= limit.
    [[nodiscard]] std::uint64_t count(std::uint64_t n) const {
        if (n > limit_) {
            throw std::out_of_range("PrimeSieve: query above sieve limit");
        }
        if (n < 2) return 0;
        // bit i <-> 2i+1; odd numbers <= n are bits [1, (n-1)/2]
        const std::uint64_t last = (n - 1) / 2;
        const std::uint64_t word = last / 64;
        std::uint64_t c = prefix_[word];
        const unsigned shift = 63 - static_cast<unsigned>(last % 64);
        c += static_cast<std::uint64_t>(std::popcount(bits_[word] << shift));
        return c + 1;  // the prime 2
    }

    [[nodiscard]] std::uint64_t count() const { return count(limit_); }

    template <typename Fn>
    void for_each_prime(Fn&& fn) const {
        for_each_prime(2, limit_, fn);
    }

    // Calls fn(p) for every prime p in [lo, hi], ascending.
    template <typename Fn>
    void for_each_prime(std::uint64_t lo, std::uint64_t hi, Fn&& fn) const {
        hi = std::min(hi, limit_);
        if (lo <= 2 && hi >= 2) fn(std::uint64_t{2});
        if (hi < 3) return;
        std::uint64_t first = std::max<std::uint64_t>(lo, 3) / 2;
        const std::uint64_t last = (hi - 1) / 2;
        for (std::uint64_t w = first / 64; w <= last / 64; ++w) {
            std::uint64_t bits = bits_[w];
            while (bits != 0) {
                const auto b = static_cast<unsigned>(std::countr_zero(bits));
                bits &= bits - 1;
                const std::uint64_t i = w * 64 + b;
                if (i < first || i > last) continue;
                fn(2 * i + 1);
            }
        }
    }

    [[nodiscard]] std::vector<std::uint64_t> primes() const {
        std::vector<std::uint64_t> out;
        out.reserve(static_cast<std::size_t>(count()));
        for_each_prime([&](std::uint64_t p) { out.push_back(p); });
        return out;
    }

private:
    void build() {
        const std::uint64_t nbits = limit_ / 2 + 1;
        bits_.assign((nbits + 63) / 64, ~std::uint64_t{0});
        bits_[0] &= ~std::uint64_t{1};  // 1 is not prime

        const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit_))) + 1;
        std::vector<std::uint32_t> base;
        {
            std::vector<bool> small(root + 1, true);
            for (std::uint64_t p = 3; p <= root; p += 2) {
                if (!small[p]) continue;
                base.push_back(static_cast<std::uint32_t>(p));
                for (std::uint64_t q = p * p; q <= root; q += 2 * p) small[q] = false;
            }
        }

        // Segment of 2^18 odd numbers = 32 KB of bits.
        constexpr std::uint64_t kSegment = 1ULL << 18;
        std::vector<std::uint64_t> next(base.size());
        for (std::size_t j = 0; j < base.size(); ++j) next[j] = (std::uint64_t{base[j]} * base[j]) / 2;

        for (std::uint64_t seg = 0; seg < nbits; seg += kSegment) {
            const std::uint64_t seg_end = std::min(nbits, seg + kSegment);
            for (std::size_t j = 0; j < base.size(); ++j) {
                std::uint64_t i = next[j];
                const std::uint64_t p = base[j];
                for (; i < seg_end; i += p) {
                    bits_[i / 64] &= ~(std::uint64_t{1} << (i % 64));
                }
                next[j] = i;
            }
        }

        // Clear bits above the limit.
        const std::uint64_t tail = nbits % 64;
        if (tail != 0) bits_.back() &= (std::uint64_t{1} << tail) - 1;
        if (limit_ % 2 == 0) {
            // 2i+1 = limit+1 is not in range
            const std::uint64_t i = limit_ / 2;
            bits_[i / 64] &= ~(std::uint64_t{1} << (i % 64));
        }

        prefix_.resize(bits_.size() + 1);
        prefix_[0] = 0;
        for (std::size_t w = 0; w < bits_.size(); ++w) {
            prefix_[w + 1] = prefix_[w] + static_cast<std::uint64_t>(std::popcount(bits_[w]));
        }
    }

    std::uint64_t limit_;
    std::vector<std::uint64_t> bits_;    // bit i <-> 2i+1
    std::vector<std::uint64_t> prefix_;  // popcount of words [0, w)
};

}  // namespace powerslab
