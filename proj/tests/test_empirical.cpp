#include <gtest/gtest.h>

#include "powerslab/empirical.hpp"
#include "support.hpp"

using namespace powerslab;

namespace {

const PrimeSieve& sieve() {
    static const PrimeSieve s(2'000'000);
    return s;
}

// r(n) by subtracting each power of two and testing primality.
std::uint64_t brute_rep(std::uint64_t n) {
    std::uint64_t c = 0;
    for (std::uint64_t pw = 1; pw < n; pw <<= 1U) c += props::trial_is_prime(n - pw) ? 1 : 0;
    return c;
}

// r_2(n) over exponent pairs a <= b.
std::uint64_t brute_rep2(std::uint64_t n) {
    std::uint64_t c = 0;
    for (int a = 0; a < 40; ++a) {
        for (int b = a; b < 40; ++b) {
            const std::uint64_t s = (1ULL << a) + (1ULL << b);
            if (s < n && props::trial_is_prime(n - s)) ++c;
        }
    }
    return c;
}

}  // namespace

TEST(EmpiricalOracle, RepCountMatchesSubtraction) {
    for (std::uint64_t n = 2; n <= 10'000; ++n) ASSERT_EQ(rep_count(n, sieve()), brute_rep(n)) << n;
}

TEST(EmpiricalOracle, TwoPowerRepCount) {
    for (std::uint64_t n = 2; n <= 3000; ++n) ASSERT_EQ(rep_count(n, 2, sieve()), brute_rep2(n)) << n;
}

TEST(EmpiricalOracle, RepresentableSetAgreesWithCounts) {
    for (int k = 1; k <= 3; ++k) {
        const auto set = representable_set(5000, k, sieve());
        for (std::uint64_t n = 2; n <= 5000; ++n) ASSERT_EQ(set.test(n), rep_count(n, k, sieve()) > 0) << k << " " << n;
        ASSERT_FALSE(set.test(0));
        ASSERT_FALSE(set.test(1));
    }
}

TEST(Empirical, StatedExamples) {
    const auto prof = density_profile(20, 1, {}, sieve());
    ASSERT_EQ(prof.points.size(), 1U);
    EXPECT_EQ(prof.points[0].count, 17U);
    EXPECT_EQ(prof.points[0].d, 0.85);
    EXPECT_EQ(goldbach_G(6, sieve()), 1U);
    EXPECT_EQ(goldbach_G(10, sieve()), 3U);
    EXPECT_EQ(gap_count(10, 2, 1, 1, sieve()), 2U);
}

TEST(Empirical, DensityProfileCheckpoints) {
    const auto prof = density_profile(100'000, 1, {1000, 100, 100'000, 1000}, sieve());
    ASSERT_EQ(prof.points.size(), 3U);
    EXPECT_EQ(prof.points[0].N, 100U);
    EXPECT_EQ(prof.points[2].N, 100'000U);
    EXPECT_THROW(density_profile(100, 1, {101}, sieve()), std::invalid_argument);
    EXPECT_THROW(density_profile(3, 1, {}, sieve()), std::invalid_argument);
}

TEST(Empirical, DensityAtOneMillionExceedsBound) {
    const auto prof = density_profile(1'000'000, 1, {}, sieve());
    EXPECT_GT(prof.points[0].d, 0.12532);
}

TEST(EmpiricalProperty, GoldbachParity) {
    for (std::uint64_t N = 6; N <= 20'000; N += 2) {
        const std::uint64_t G = goldbach_G(N, sieve());
        const bool half_odd_prime = N / 2 > 2 && sieve().is_prime(N / 2);
        ASSERT_EQ(G % 2 == 1, half_odd_prime) << N;
    }
}

TEST(Empirical, GoldbachErrors) {
    EXPECT_THROW(goldbach_G(7, sieve()), std::invalid_argument);
    EXPECT_THROW(goldbach_G(4, sieve()), std::invalid_argument);
    const PrimeSieve small(100);
    EXPECT_THROW(goldbach_G(102, small), std::invalid_argument);
}

TEST(EmpiricalProperty, GapCountsSplitOverResidues) {
    const std::uint64_t N = 100'000;
    for (std::uint64_t h : {2ULL, 6ULL, 30ULL}) {
        const std::uint64_t all = gap_count(N, h, 1, 1, sieve());
        std::uint64_t split = 0;
        for (std::uint64_t r = 1; r < 10; ++r) {
            if (std::gcd(r, 10ULL) == 1) split += gap_count(N, h, r, 10, sieve());
        }
        // p2 in {2, 5} is the only residue not coprime to 10
        std::uint64_t excluded = 0;
        for (std::uint64_t p : {2ULL, 5ULL}) excluded += sieve().is_prime(p + h) ? 1 : 0;
        EXPECT_EQ(split + excluded, all) << h;
    }
    EXPECT_THROW(gap_count(100, 2, 2, 4, sieve()), std::invalid_argument);
    EXPECT_THROW(gap_count(100, 100, 1, 1, sieve()), std::invalid_argument);
}

TEST(Empirical, HardyLittlewoodRatioIsOrderOne) {
    const Interval C0 = compute_C0(100'000);
    for (std::uint64_t N : {100'000ULL, 1'000'000ULL, 1'999'998ULL}) {
        const double r = hl_ratio(N, sieve(), C0);
        EXPECT_GT(r, 0.8) << N;
        EXPECT_LT(r, 1.5) << N;
    }
}

TEST(Empirical, K2WitnessesAreValid) {
    for (std::uint64_t n = 8; n <= 5000; n += 2) {
        const auto w = verify_k2_decomposition(n, sieve());
        ASSERT_TRUE(w.has_value()) << n;
        ASSERT_TRUE(sieve().is_prime(w->p1) && sieve().is_prime(w->p2));
        ASSERT_EQ(w->p1 + w->p2 + (1ULL << w->a1) + (1ULL << w->a2), n);
    }
    EXPECT_THROW(verify_k2_decomposition(9, sieve()), std::invalid_argument);
    const auto scan = scan_k2_decompositions(8, 20'000, sieve());
    EXPECT_EQ(scan.checked, 9997U);
    EXPECT_TRUE(scan.failures.empty());
}
