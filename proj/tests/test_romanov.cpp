#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "powerslab/romanov.hpp"
#include "support.hpp"

using namespace powerslab;

namespace {

const Interval& C0() {
    static const Interval c = compute_C0(1'000'000);
    return c;
}

RomanovConfig synthetic_config(int m, double C1, std::uint64_t seed) {
    props::Rng rng(seed);
    std::map<int, double> table;
    for (int d : divisors_of(m)) table[d] = 1.0 + 0.2 * rng.unit();
    return make_romanov_config(m, C1, C0(), table, 2.0 + 3.0 * rng.unit());
}

// d_lower from the literal quadruple sum over (kappa1, kappa2, alpha1, alpha2).
double brute_density(const RomanovConfig& cfg) {
    const std::uint64_t ell = cfg.ell;
    const int m = cfg.m;
    auto power = [&](int a) { return (std::uint64_t{1} << a) % ell; };
    double total = 0.0;
    for (std::uint64_t k = 0; k < ell; ++k) {
        std::uint64_t N1 = 0;
        double T = 0.0;
        for (std::uint64_t k1 = 0; k1 < ell; ++k1) {
            if (std::gcd(k1, ell) != 1) continue;
            for (int a1 = 0; a1 < m; ++a1) {
                if ((k1 + power(a1)) % ell != k) continue;
                ++N1;
                for (std::uint64_t k2 = 0; k2 < ell; ++k2) {
                    if (std::gcd(k2, ell) != 1) continue;
                    for (int a2 = 0; a2 < m; ++a2) {
                        if ((k2 + power(a2)) % ell != k) continue;
                        const int diff = ((a1 - a2) % m + m) % m;
                        T += cfg.S_table.at(std::gcd(diff, m));
                    }
                }
            }
        }
        if (N1 == 0) continue;
        const double D = 1.0 + cfg.C0.hi() * cfg.C1 * cfg.C3 * T /
                                   (m * log2_interval().lo() * static_cast<double>(N1));
        const double hi = std::ceil(D);
        const double lo = std::floor(D);
        total += (hi + lo - D) / (hi * lo) * static_cast<double>(N1);
    }
    return total / (static_cast<double>(cfg.phi_ell) * m * log2_interval().hi());
}

}  // namespace

TEST(RomanovConfig, DefaultsAndErrors) {
    const RomanovConfig cfg = make_romanov_config(24, 8.0, C0());
    EXPECT_EQ(cfg.ell, 16777215U);
    EXPECT_EQ(cfg.phi_ell, 6635520U);
    EXPECT_EQ(cfg.C3, 3.73922);
    EXPECT_EQ(cfg.S_table.size(), 8U);
    EXPECT_EQ(cfg.ell_primes, (std::vector<std::uint64_t>{3, 5, 7, 13, 17, 241}));
    EXPECT_THROW(make_romanov_config(6, 8.0, C0()), ConfigError);
    EXPECT_THROW(make_romanov_config(6, 8.0, C0(), std::map<int, double>{{1, 1.0}, {2, 1.0}, {3, 1.0}, {6, 1.0}}),
                 ConfigError);
    EXPECT_THROW(make_romanov_config(6, 8.0, C0(), std::map<int, double>{{1, 1.0}, {2, 1.0}, {6, 1.0}}, 3.0),
                 ConfigError);
    EXPECT_THROW(make_romanov_config(0, 8.0, C0()), std::invalid_argument);
    EXPECT_THROW(make_romanov_config(33, 8.0, C0()), std::invalid_argument);
    EXPECT_THROW(make_romanov_config(24, 0.0, C0()), std::invalid_argument);
}

TEST(Romanov, DivisorsOf) {
    EXPECT_EQ(divisors_of(24), (std::vector<int>{1, 2, 3, 4, 6, 8, 12, 24}));
    EXPECT_EQ(divisors_of(1), (std::vector<int>{1}));
    EXPECT_EQ(divisors_of(13), (std::vector<int>{1, 13}));
}

TEST(RomanovOracle, MaskerMatchesGcdDefinition) {
    for (int m = 2; m <= 14; ++m) {
        const RomanovConfig cfg = synthetic_config(m, 8.0, 1);
        const AlphaMasker masker(cfg);
        for (std::uint64_t k = 0; k < cfg.ell; ++k) ASSERT_EQ(masker(k), valid_alphas(k, cfg)) << m << " " << k;
    }
    props::Rng rng(17);
    for (int m : {24, 29, 32}) {
        const RomanovConfig cfg = m == 24 ? make_romanov_config(24, 8.0, C0()) : synthetic_config(m, 8.0, 2);
        const AlphaMasker masker(cfg);
        for (int iter = 0; iter < 20'000; ++iter) {
            const std::uint64_t k = rng.between(0, cfg.ell - 1);
            ASSERT_EQ(masker(k), valid_alphas(k, cfg)) << m << " " << k;
        }
    }
}

TEST(RomanovOracle, ClassTMatchesPairSum) {
    props::Rng rng(23);
    for (int m : {3, 8, 24}) {
        const RomanovConfig cfg = m == 24 ? make_romanov_config(24, 8.0, C0()) : synthetic_config(m, 8.0, 3);
        for (int iter = 0; iter < 300; ++iter) {
            const std::uint32_t mask = static_cast<std::uint32_t>(rng.next()) & cfg.full_mask();
            double T = 0.0;
            for (int a1 = 0; a1 < m; ++a1) {
                for (int a2 = 0; a2 < m; ++a2) {
                    if (((mask >> a1) & 1U) && ((mask >> a2) & 1U)) {
                        T += cfg.S_table.at(std::gcd(((a1 - a2) % m + m) % m, m));
                    }
                }
            }
            ASSERT_NEAR(class_T(mask, cfg), T, 1e-12 * (1.0 + T));
        }
    }
}

TEST(RomanovOracle, PipelineMatchesQuadrupleLoop) {
    for (int m : {2, 3, 4, 6}) {
        for (double C1 : {2.0, 4.0, 8.0}) {
            const RomanovConfig cfg = synthetic_config(m, C1, static_cast<std::uint64_t>(m) * 31);
            const double want = brute_density(cfg);
            const DensityResult got = density_lower_bound(cfg);
            EXPECT_NEAR(got.d_lower, want, 1e-12 * want) << "m=" << m << " C1=" << C1;
        }
    }
}

TEST(RomanovProperty, MassIdentity) {
    for (int m : {2, 3, 4, 6, 8, 12, 24}) {
        const RomanovConfig cfg = m == 24 ? make_romanov_config(24, 8.0, C0()) : synthetic_config(m, 8.0, 5);
        const DensityResult r = density_lower_bound(cfg);
        EXPECT_EQ(r.total_N1, cfg.phi_ell * static_cast<std::uint64_t>(m)) << m;
    }
}

TEST(RomanovProperty, MemoIsTransparent) {
    for (int m : {12, 16}) {
        const RomanovConfig cfg = synthetic_config(m, 6.7814, 7);
        DensityOptions memo;
        DensityOptions plain;
        plain.memoize = false;
        const DensityResult a = density_lower_bound(cfg, memo);
        const DensityResult b = density_lower_bound(cfg, plain);
        EXPECT_EQ(a.d_lower, b.d_lower);
        EXPECT_EQ(a.class_count_nonzero, b.class_count_nonzero);
    }
}

TEST(RomanovProperty, WorkerCountDoesNotChangeBits) {
    const RomanovConfig cfg = synthetic_config(18, 4.0, 8);
    DensityOptions one;
    DensityOptions four;
    four.workers = 4;
    EXPECT_EQ(density_lower_bound(cfg, one).d_lower, density_lower_bound(cfg, four).d_lower);
}

TEST(RomanovProperty, PerClassCallbackAgreesWithClassStats) {
    const RomanovConfig cfg = synthetic_config(6, 3.02, 9);
    std::vector<ClassStats> seen;
    DensityOptions opts;
    opts.per_class = [&](const ClassStats& s) { seen.push_back(s); };
    const DensityResult r = density_lower_bound(cfg, opts);
    ASSERT_EQ(seen.size(), cfg.ell);
    double sum = 0.0;
    for (std::uint64_t k = 0; k < cfg.ell; ++k) {
        const ClassStats direct = class_stats(k, cfg);
        EXPECT_EQ(seen[k].k, k);
        EXPECT_EQ(seen[k].alpha_mask, direct.alpha_mask);
        EXPECT_EQ(seen[k].N1, direct.N1);
        EXPECT_NEAR(seen[k].D, direct.D, 1e-12 * (1.0 + direct.D));
        EXPECT_NEAR(seen[k].share, direct.share, 1e-15);
        sum += seen[k].share;
    }
    EXPECT_NEAR(sum, r.d_lower, 1e-12);
}

TEST(RomanovProperty, DensityDecreasesInC1) {
    double prev = 1.0;
    for (double C1 : {1.0, 2.0, 3.02, 4.0, 6.7814, 8.0, 12.0}) {
        const double d = density_lower_bound(synthetic_config(12, C1, 10)).d_lower;
        EXPECT_LT(d, prev) << C1;
        EXPECT_GT(d, 0.0);
        prev = d;
    }
}

TEST(PintzLemma, FactorValues) {
    EXPECT_DOUBLE_EQ(pintz_density_factor(1.0), 1.0);
    EXPECT_DOUBLE_EQ(pintz_density_factor(2.0), 0.5);
    EXPECT_DOUBLE_EQ(pintz_density_factor(1.5), (2.0 + 1.0 - 1.5) / 2.0);
    EXPECT_THROW(pintz_density_factor(0.5), std::invalid_argument);
    EXPECT_THROW(pintz_density_factor(NAN), std::invalid_argument);
    EXPECT_THROW(class_D(0, 1.0, make_romanov_config(24, 8.0, C0())), std::invalid_argument);
}

TEST(PintzLemmaOracle, RandomSequencesSatisfyBound) {
    props::Rng rng(4404);
    int checked = 0;
    while (checked < 10'000) {
        const std::size_t n = rng.between(1, 60);
        const std::uint64_t top = rng.between(1, 9);
        std::uint64_t M = 0;
        std::uint64_t Q = 0;
        std::uint64_t positive = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint64_t b = rng.next() % 3 == 0 ? 0 : rng.between(0, top);
            M += b;
            Q += b * b;
            positive += b > 0 ? 1 : 0;
        }
        if (M == 0) continue;
        ++checked;
        const double D = static_cast<double>(Q) / static_cast<double>(M);
        const double slack = 1.0 + 2.0 * rng.unit();
        for (double d : {D, D * slack}) {
            ASSERT_GE(static_cast<double>(positive) + 1e-9, pintz_density_factor(d) * static_cast<double>(M))
                << "M=" << M << " Q=" << Q << " D=" << d;
        }
    }
}

TEST(PintzThreshold, QuarterBoundary) {
    EXPECT_EQ(pintz_threshold(0.25007, 1), std::optional<int>(2));
    EXPECT_EQ(pintz_threshold(0.25, 1), std::nullopt);
    EXPECT_EQ(pintz_threshold(0.3, 2), std::optional<int>(4));
    EXPECT_THROW(pintz_threshold(0.6, 1), std::invalid_argument);
    EXPECT_THROW(pintz_threshold(-0.1, 1), std::invalid_argument);
    EXPECT_THROW(pintz_threshold(0.3, 0), std::invalid_argument);
}

TEST(Romanov, DefaultModulusReference) {
    const RomanovConfig cfg = make_romanov_config(24, 6.7814, compute_C0(10'000'000));
    const DensityResult r = density_lower_bound(cfg);
    EXPECT_NEAR(r.d_lower, 0.12532, 2e-4);
    EXPECT_EQ(r.class_count_nonzero, 16777071U);
    EXPECT_EQ(r.total_N1, 6635520ULL * 24);
}
