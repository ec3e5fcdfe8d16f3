#pragma once

// Sums of k powers of two, their difference correlations r_{k,k}(m, L) and
// finite-L estimates of the Khalfalah-Pintz constants A(k).

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "powerslab/constants.hpp"
#include "powerslab/factorize.hpp"
#include "powerslab/interval.hpp"
#include "powerslab/parallel.hpp"

namespace powerslab {

// Sums reach k * 2^L, which is 2^64 for (k, L) = (1, 64).
using PowerSum = unsigned __int128;
using PowerDiff = __int128;

struct PowerSumDistribution {
    int k = 0;
    int L = 0;
    // value -> number of ordered tuples (a_1..a_k) in {0..L}^k with sum 2^{a_i} = value;
    // ascending by value
    std::vector<std::pair<PowerSum, std::uint64_t>> counts;

    [[nodiscard]] std::uint64_t total() const {
        std::uint64_t t = 0;
        for (const auto& [v, c] : counts) t += c;
        return t;
    }
    [[nodiscard]] std::uint64_t count_of(PowerSum v) const {
        auto it = std::lower_bound(counts.begin(), counts.end(), v,
                                   [](const auto& e, PowerSum x) { return e.first < x; });
        return it != counts.end() && it->first == v ? it->second : 0;
    }
    [[nodiscard]] PowerSum min_value() const { return counts.front().first; }
    [[nodiscard]] PowerSum max_value() const { return counts.back().first; }
};

inline PowerSumDistribution build_distribution(int k, int L) {
    if (k < 1 || k > 4) {
        throw std::invalid_argument("build_distribution: k must be in 1..4");
    }
    if (L < 0) {
        throw std::invalid_argument("build_distribution: L must be nonnegative");
    }
    // Differences of two sums must have magnitude below 2^64: k 2^L - k < 2^64.
    const PowerSum top = static_cast<PowerSum>(k) << L;
    if (L > 64 || top - static_cast<PowerSum>(k) > static_cast<PowerSum>(~std::uint64_t{0})) {
        throw std::invalid_argument("build_distribution: k*2^L exceeds the supported value range");
    }
    std::map<PowerSum, std::uint64_t> acc{{0, 1}};
    for (int step = 0; step < k; ++step) {
        std::map<PowerSum, std::uint64_t> next;
        for (const auto& [v, c] : acc) {
            for (int a = 0; a <= L; ++a) next[v + (PowerSum{1} << a)] += c;
        }
        acc = std::move(next);
    }
    PowerSumDistribution d;
    d.k = k;
    d.L = L;
    d.counts.assign(acc.begin(), acc.end());
    return d;
}

// m -> r_{k,k}(m, L) for m != 0, ascending by m.
inline std::map<PowerDiff, std::uint64_t> correlate_r(const PowerSumDistribution& dist) {
    if (dist.counts.empty()) {
        throw std::invalid_argument("correlate_r: empty distribution");
    }
    std::map<PowerDiff, std::uint64_t> r;
    for (const auto& [s, cs] : dist.counts) {
        for (const auto& [t, ct] : dist.counts) {
            if (s == t) continue;
            r[static_cast<PowerDiff>(s) - static_cast<PowerDiff>(t)] += cs * ct;
        }
    }
    return r;
}

namespace detail {

// Odd-prime weight prod (p-1)/(p-2) over the distinct odd primes of an odd o.
class OddWeightOracle {
public:
    // Odd values below this bound go through a smallest-prime-factor table.
    static constexpr std::uint64_t kTableBound = std::uint64_t{1} << 26;

    explicit OddWeightOracle(std::uint64_t max_odd) {
        small_primes_ = sieve_small(1U << 13);
        for (std::uint32_t p : small_primes_) {
            ratios_.push_back(make_ratio(p));
            inverses_.push_back(inverse_mod_2_64(p));
        }
        if (max_odd < kTableBound) build_table(max_odd);
    }

    [[nodiscard]] Interval weight(std::uint64_t o) const {
        if (!spf_.empty() && o / 2 < spf_.size()) return weight_from_table(o);
        return weight_by_division(o);
    }

private:
    static std::vector<std::uint32_t> sieve_small(std::uint32_t bound) {
        std::vector<bool> composite(bound, false);
        std::vector<std::uint32_t> out;
        for (std::uint32_t p = 3; p < bound; p += 2) {
            if (composite[p]) continue;
            out.push_back(p);
            for (std::uint64_t q = std::uint64_t{p} * p; q < bound; q += 2 * p) composite[q] = true;
        }
        return out;
    }

    static Interval make_ratio(std::uint64_t p) {
        return Interval::from_unsigned(p - 1) / Interval::from_unsigned(p - 2);
    }

    static std::uint64_t inverse_mod_2_64(std::uint64_t p) {
        std::uint64_t inv = p;  // correct to 3 bits for odd p
        for (int i = 0; i < 5; ++i) inv *= 2 - p * inv;
        return inv;
    }

    // spf_[o/2] = 1 + index of the smallest odd prime factor of odd o, 0 if o is 1 or prime.
    void build_table(std::uint64_t max_odd) {
        spf_.assign(static_cast<std::size_t>(max_odd / 2 + 1), 0);
        for (std::size_t idx = 0; idx < small_primes_.size(); ++idx) {
            const std::uint64_t p = small_primes_[idx];
            if (p * p > max_odd) break;
            for (std::uint64_t q = p * p; q <= max_odd; q += 2 * p) {
                auto& slot = spf_[static_cast<std::size_t>(q / 2)];
                if (slot == 0) slot = static_cast<std::uint16_t>(idx + 1);
            }
        }
    }

    [[nodiscard]] Interval weight_from_table(std::uint64_t o) const {
        Interval w(1.0);
        std::uint64_t last = 0;
        while (o > 1) {
            const std::uint16_t slot = spf_[static_cast<std::size_t>(o / 2)];
            if (slot == 0) {
                if (o != last) w *= make_ratio(o);
                break;
            }
            const std::uint64_t p = small_primes_[slot - 1U];
            if (p != last) w *= ratios_[slot - 1U];
            last = p;
            o /= p;
        }
        return w;
    }

    [[nodiscard]] Interval weight_by_division(std::uint64_t o) const {
        Interval w(1.0);
        for (std::size_t i = 0; i < small_primes_.size(); ++i) {
            const std::uint64_t p = small_primes_[i];
            if (p * p > o) break;
            if (o * inverses_[i] <= ~std::uint64_t{0} / p) {
                w *= ratios_[i];
                do {
                    o /= p;
                } while (o * inverses_[i] <= ~std::uint64_t{0} / p);
            }
        }
        if (o == 1) return w;
        const std::uint64_t bound = small_primes_.back();
        if (o < bound * bound) return w * make_ratio(o);
        const FactorList rest = factorize(o);
        for (const auto& pp : rest.factors) w *= make_ratio(pp.prime);
        return w;
    }

    std::vector<std::uint32_t> small_primes_;  // odd primes below 2^13
    std::vector<Interval> ratios_;
    std::vector<std::uint64_t> inverses_;
    std::vector<std::uint16_t> spf_;
};

inline std::uint64_t odd_part(std::uint64_t m) {
    return m >> static_cast<unsigned>(__builtin_ctzll(m));
}

}  // namespace detail

struct AkEstimate {
    int k = 0;
    int L = 0;
    Interval S_value;
    Interval estimate;
    std::optional<Interval> paper_bracket;
};

// Largest L accepted by estimate_Ak for each k.
inline int ak_cap(int k) {
    switch (k) {
        case 1: return 64;
        case 2: return 48;
        case 3: return 32;
        case 4: return 24;
        default: throw std::invalid_argument("ak_cap: k must be in 1..4");
    }
}

struct AkOptions {
    unsigned workers = 1;
    // Used for the k = 1 odd parts 2^d - 1; may be null.
    FactorCache* cache = nullptr;
};

// S(k, L) = sum_{m != 0} r_{k,k}(m, L) sigma(m) and S / (2 L^{2k}) - 1.
//
// Terms are streamed pair by pair over the sorted distribution without
// materializing r. Since r and sigma are even in m, S = 2 sum_{s > t} c_s c_t
// sigma(s - t); outer index s ascending, inner t ascending, fixed chunks.
inline AkEstimate estimate_Ak(int k, int L, const Interval& C0, const AkOptions& opts = {}) {
    if (k < 1 || k > 4) {
        throw std::invalid_argument("estimate_Ak: k must be in 1..4");
    }
    if (L < 1 || L > ak_cap(k)) {
        throw std::invalid_argument("estimate_Ak: L must be in 1.." + std::to_string(ak_cap(k)) +
                                    " for k=" + std::to_string(k));
    }
    const PowerSumDistribution dist = build_distribution(k, L);
    const auto& counts = dist.counts;
    const auto max_diff = static_cast<std::uint64_t>(dist.max_value() - dist.min_value());
    const detail::OddWeightOracle oracle(max_diff);

    auto weight = [&](std::uint64_t m) -> Interval {
        const std::uint64_t o = detail::odd_part(m);
        if (opts.cache != nullptr && k == 1) return odd_prime_weight(opts.cache->get(o));
        return oracle.weight(o);
    };

    const Interval half_sum = chunked_reduce<Interval>(
        counts.size(), 64, opts.workers, Interval(0.0),
        [&](std::uint64_t begin, std::uint64_t end) {
            Interval acc(0.0);
            for (std::uint64_t i = begin; i < end; ++i) {
                const auto& [s, cs] = counts[static_cast<std::size_t>(i)];
                for (std::uint64_t j = 0; j < i; ++j) {
                    const auto& [t, ct] = counts[static_cast<std::size_t>(j)];
                    const auto m = static_cast<std::uint64_t>(s - t);
                    acc += Interval::from_unsigned(cs * ct) * weight(m);
                }
            }
            return acc;
        },
        [](Interval& acc, const Interval& part) { acc += part; });

    AkEstimate est;
    est.k = k;
    est.L = L;
    est.S_value = Interval(2.0) * (Interval(2.0) * C0) * half_sum;
    const Interval norm = Interval(2.0) * pow(Interval(static_cast<double>(L)), static_cast<unsigned>(2 * k));
    est.estimate = est.S_value / norm - Interval(1.0);
    est.paper_bracket = published_A_brackets().at(k);
    return est;
}

}  // namespace powerslab
