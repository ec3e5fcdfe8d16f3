#include <cmath>

#include <gtest/gtest.h>

#include "powerslab/constants.hpp"

using namespace powerslab;

TEST(TwinPrimeConstant, DefaultLimitEnclosure) {
    const Interval c0 = compute_C0(10'000'000);
    // leading digits 0.66016...
    EXPECT_TRUE(c0.subset_of(Interval(0.66016, 0.66017)));
    EXPECT_TRUE(c0.contains(0.6601618158468696));
    EXPECT_LT(c0.width(), 1e-5);
}

TEST(TwinPrimeConstant, SmallestLimitIsExplicit) {
    // Only p = 3 enters: [3/4 * (1 - 1/3), 3/4].
    const Interval c0 = compute_C0(5);
    EXPECT_LE(c0.lo(), 0.5);
    EXPECT_GT(c0.lo(), 0.5 - 1e-15);
    EXPECT_EQ(c0.hi(), 0.75);
    EXPECT_THROW(compute_C0(4), std::invalid_argument);
}

TEST(TwinPrimeConstant, EnclosuresNestAsLimitGrows) {
    Interval prev = compute_C0(5);
    for (std::uint64_t limit : {10ULL, 100ULL, 1000ULL, 100'000ULL, 1'000'000ULL}) {
        const Interval c = compute_C0(limit);
        EXPECT_TRUE(c.contains(0.6601618158468696)) << limit;
        EXPECT_LE(c.hi(), prev.hi());
        EXPECT_LT(c.width(), prev.width());
        prev = c;
    }
}

TEST(SingularSeries, OddPrimeWeights) {
    const Interval c0 = compute_C0(100'000);
    const Interval s2 = sigma_singular(2, c0);
    EXPECT_EQ(s2, Interval(2.0) * c0);
    EXPECT_EQ(sigma_singular(1, c0), s2);
    EXPECT_EQ(sigma_singular(64, c0), s2);
    // 3: factor 2; 15: 2 * 4/3
    EXPECT_TRUE(sigma_singular(3, c0).contains(4.0 * c0.mid()));
    EXPECT_TRUE((sigma_singular(15, c0) / s2).contains(8.0 / 3.0));
    EXPECT_EQ(sigma_singular(-15, c0), sigma_singular(15, c0));
    EXPECT_THROW(sigma_singular(0, c0), std::invalid_argument);
}

TEST(SingularSeries, DependsOnlyOnOddPrimeSupport) {
    const Interval c0 = compute_C0(1000);
    for (std::int64_t m : {49LL, 7LL * 8, 343LL * 1024, -7LL}) EXPECT_EQ(sigma_singular(m, c0), sigma_singular(7, c0)) << m;
}

TEST(LinnikConstants, PublishedValues) {
    const LinnikConstants c = LinnikConstants::with_prime_limit(100'000);
    EXPECT_EQ(c.A(1), Interval(0.27835, 0.27926));
    EXPECT_EQ(c.A(4).hi(), 0.003992);
    EXPECT_THROW((void)c.A(5), std::out_of_range);
    EXPECT_EQ(c.c1(true).hi(), 0.7163436);
    EXPECT_EQ(c.c1(false).hi(), 0.7894009);
    EXPECT_EQ(c.epsilon, 1e-10);
    EXPECT_NO_THROW(c.validate());
}

TEST(LinnikConstants, ValidateRejectsUnsetC0AndBadBrackets) {
    LinnikConstants c;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.C0 = compute_C0(1000);
    c.A_brackets[3] = Interval(0.1, 0.2);
    EXPECT_THROW(c.validate(), std::invalid_argument);
}
