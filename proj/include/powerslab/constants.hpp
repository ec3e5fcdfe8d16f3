#pragma once

// Twin-prime constant, the singular series and the published constants
// that feed the Linnik and Romanov computations.

#include <cstdint>
#include <cstdlib>
#include <map>
#include <stdexcept>

#include "powerslab/factorize.hpp"
#include "powerslab/interval.hpp"
#include "powerslab/primes.hpp"

namespace powerslab {

// Encloses prod_{p>2} (1 - 1/(p-1)^2).
//
// The finite product runs over odd primes p < prime_limit and is an upper
// bound. Every remaining factor lies in (0, 1) and
//   prod_{p >= P} (1 - 1/(p-1)^2) >= 1 - sum_{n >= P} 1/(n-1)^2 > 1 - 1/(P-2),
// which gives the lower endpoint.
inline Interval compute_C0(std::uint64_t prime_limit) {
    if (prime_limit < 5) {
        throw std::invalid_argument("compute_C0: prime_limit must be at least 5");
    }
    const PrimeSieve sieve(prime_limit - 1);
    Interval product(1.0);
    sieve.for_each_prime(3, prime_limit - 1, [&](std::uint64_t p) {
        const auto q = static_cast<std::int64_t>(p - 1);
        // 1 - 1/q^2 = (q^2 - 1) / q^2, exact in double for q < 2^26
        product *= Interval::ratio(q * q - 1, q * q);
    });
    const Interval tail = Interval(1.0) - Interval(1.0) / Interval::from_unsigned(prime_limit - 2);
    return Interval(tail.lo(), 1.0) * product;
}

// prod_{p | m, p odd} (p-1)/(p-2). The prime 2 is skipped: its factor has a
// zero denominator and the singular series only weighs odd primes.
inline Interval odd_prime_weight(const FactorList& f) {
    Interval w(1.0);
    for (const auto& pp : f.factors) {
        if (pp.prime == 2) continue;
        w *= Interval::from_unsigned(pp.prime - 1) / Interval::from_unsigned(pp.prime - 2);
    }
    return w;
}

inline Interval sigma_from_factors(const FactorList& f, const Interval& C0) {
    return Interval(2.0) * C0 * odd_prime_weight(f);
}

// sigma(m) = 2 C0 prod_{p | m, p odd} (p-1)/(p-2); even in m.
inline Interval sigma_singular(std::int64_t m, const Interval& C0) {
    if (m == 0) {
        throw std::invalid_argument("sigma_singular: m must be nonzero");
    }
    const std::uint64_t mag = m < 0 ? std::uint64_t{0} - static_cast<std::uint64_t>(m)
                                    : static_cast<std::uint64_t>(m);
    return sigma_from_factors(factorize(mag), C0);
}

// Khalfalah-Pintz enclosures of A(1)..A(4).
inline const std::map<int, Interval>& published_A_brackets() {
    static const std::map<int, Interval> brackets{
        {1, Interval(0.27835, 0.27926)},
        {2, Interval(0.05458, 0.05549)},
        {3, Interval(0.012697, 0.013598)},
        {4, Interval(0.003091, 0.003992)},
    };
    return brackets;
}

// Published constants. Brackets are stored as given; c1 is only known by an
// upper bound, so its lower endpoint is 0. C0 is computed, see with_prime_limit().
struct LinnikConstants {
    Interval C0;
    Interval R0{1.93642, 1.93656};
    Interval c1_grh{0.0, 0.7163436};
    Interval c1_uncond{0.0, 0.7894009};
    std::map<int, Interval> A_brackets = published_A_brackets();
    double epsilon = 1e-10;
    Interval log2 = log2_interval();

    static constexpr std::uint64_t kDefaultPrimeLimit = 10'000'000;

    static LinnikConstants with_prime_limit(std::uint64_t prime_limit) {
        LinnikConstants c;
        c.C0 = compute_C0(prime_limit);
        c.validate();
        return c;
    }

    const Interval& A(int k) const {
        auto it = A_brackets.find(k);
        if (it == A_brackets.end()) {
            throw std::out_of_range("LinnikConstants: no A(k) data for k=" + std::to_string(k));
        }
        return it->second;
    }

    const Interval& c1(bool grh) const { return grh ? c1_grh : c1_uncond; }

    void validate() const {
        if (!C0.positive()) {
            throw std::invalid_argument("LinnikConstants: C0 enclosure not set");
        }
        double prev = 2.0;
        for (const auto& [k, a] : A_brackets) {
            if (a.hi() >= prev) {
                throw std::invalid_argument("LinnikConstants: A(k) upper endpoints must decrease in k");
            }
            prev = a.hi();
        }
    }
};

}  // namespace powerslab
