#include <cmath>

#include <gtest/gtest.h>

#include "powerslab/linnik.hpp"

using namespace powerslab;

namespace {

const LinnikConstants& constants() {
    static const LinnikConstants c = LinnikConstants::with_prime_limit(LinnikConstants::kDefaultPrimeLimit);
    return c;
}

double cutoff(bool grh, const LinnikConstants& c) {
    const double l2 = c.log2.hi();
    return grh ? l2 / 4.0 : 5.0 * l2 / 18.0 + 0.5 * l2 * c.epsilon;
}

// Closed-form boundary: for even K the criterion is linear in C1.
double even_boundary(int K, bool grh, const LinnikConstants& c) {
    const int i = K / 2;
    const double a = c.A(i).hi();
    const double p = std::pow(c.c1(grh).hi(), 2 * i - 2);
    const double slope = 0.5 * c.R0.hi() * c.C0.hi();
    const double c2 = (1.0 - a) / p;
    return 2.0 + (c2 - cutoff(grh, c)) / slope;
}

// Odd K: (a_i + x p_i)(a_j + x p_j) = 1 is a quadratic in x = C2'.
double odd_boundary(int K, bool grh, const LinnikConstants& c) {
    const int i = (K + 1) / 2;
    const int j = K / 2;
    const double ai = c.A(i).hi();
    const double aj = c.A(j).hi();
    const double pi = std::pow(c.c1(grh).hi(), 2 * i - 2);
    const double pj = std::pow(c.c1(grh).hi(), 2 * j - 2);
    const double qa = pi * pj;
    const double qb = ai * pj + aj * pi;
    const double qc = ai * aj - 1.0;
    const double x = (-qb + std::sqrt(qb * qb - 4.0 * qa * qc)) / (2.0 * qa);
    const double slope = 0.5 * c.R0.hi() * c.C0.hi();
    return 2.0 + (x - cutoff(grh, c)) / slope;
}

}  // namespace

TEST(Criterion, HalvesAndC2prime) {
    const auto r = criterion_lhs(7, 4.0, false, constants());
    EXPECT_EQ(r.i, 4);
    EXPECT_EQ(r.j, 3);
    const double expected = 0.5 * 2.0 * constants().R0.hi() * constants().C0.hi() + cutoff(false, constants());
    EXPECT_DOUBLE_EQ(r.C2prime, expected);
    EXPECT_THROW(compute_C2prime(1.5, true, constants()), std::invalid_argument);
}

TEST(Criterion, SixPowersUnderGrhAtImprovedC1) {
    const auto r = criterion_lhs(6, 6.7814, true, constants());
    EXPECT_TRUE(r.satisfied);
    EXPECT_LE(r.lhs, 0.865);
    EXPECT_NEAR(r.lhs, 0.86404, 5e-5);
}

TEST(Criterion, RejectsUnsupportedK) {
    EXPECT_THROW(criterion_lhs(1, 3.0, true, constants()), std::invalid_argument);
    EXPECT_THROW(criterion_lhs(9, 3.0, true, constants()), std::out_of_range);
    EXPECT_THROW(max_C1(2, true, constants()), std::invalid_argument);
    EXPECT_THROW(max_C1(9, true, constants()), std::out_of_range);
}

TEST(CriterionOracle, BisectionMatchesClosedForms) {
    for (bool grh : {true, false}) {
        for (int K = 2; K <= 8; ++K) {
            const double want = K % 2 == 0 ? even_boundary(K, grh, constants()) : odd_boundary(K, grh, constants());
            EXPECT_NEAR(criterion_boundary_C1(K, grh, constants()), want, 2e-6) << "K=" << K << " grh=" << grh;
        }
    }
}

TEST(CriterionProperty, MonotoneInC1) {
    for (int K = 2; K <= 8; ++K) {
        double prev = -1.0;
        for (double C1 = 2.0; C1 <= 20.0; C1 += 0.25) {
            const double lhs = criterion_lhs(K, C1, false, constants()).lhs;
            ASSERT_GT(lhs, prev);
            prev = lhs;
        }
    }
}

TEST(CriterionProperty, BoundarySeparatesSatisfiedFromFailing) {
    for (int K = 3; K <= 8; ++K) {
        const double b = max_C1(K, true, constants(), 1e-9);
        EXPECT_TRUE(criterion_lhs(K, b, true, constants()).satisfied);
        EXPECT_FALSE(criterion_lhs(K, b + 1e-6, true, constants()).satisfied);
    }
}

TEST(Criterion, ReferenceTableRows) {
    for (int K = 3; K <= 6; ++K) {
        EXPECT_NEAR(max_C1(K, true, constants()), *reference_required_C1(K, true), 0.002) << K;
        EXPECT_NEAR(max_C1(K, false, constants()), *reference_required_C1(K, false), 0.002) << K;
    }
    EXPECT_NEAR(max_C1(7, false, constants()), 6.762, 0.002);
    EXPECT_NEAR(criterion_boundary_C1(2, true, constants()), 2.856, 0.002);
    EXPECT_NEAR(criterion_boundary_C1(2, false, constants()), 2.826, 0.002);
    EXPECT_EQ(reference_required_C1(8, true), std::nullopt);
}

TEST(Criterion, BoundaryFailsOutsideBracket) {
    LinnikConstants c = constants();
    c.A_brackets[1] = Interval(0.999, 0.9999);
    EXPECT_THROW(criterion_boundary_C1(2, true, c), std::domain_error);
    EXPECT_THROW(criterion_boundary_C1(3, true, constants(), 0.0), std::invalid_argument);
}

TEST(LinnikTable, LayoutAndDiscrepancyNote) {
    K2Delegation k2;
    k2.d_lower = 0.25007;
    k2.K = 2;
    const ReportTable t = make_linnik_table(constants(), k2);
    ASSERT_EQ(t.rows().size(), 11U);
    const std::size_t notes = t.column_index("notes");
    int annotated = 0;
    for (const auto& row : t.rows()) {
        const auto& n = std::get<std::string>(row.cells[notes]);
        if (n.rfind("discrepancy", 0) == 0) {
            ++annotated;
            EXPECT_EQ(std::get<std::int64_t>(row.cells[0]), 7);
            EXPECT_EQ(row.provenance, Provenance::Derived);
        }
    }
    EXPECT_EQ(annotated, 1);
    EXPECT_EQ(std::get<std::int64_t>(t.rows()[4].cells[0]), 2);
    EXPECT_DOUBLE_EQ(t.real_at(4, "C1_required"), 3.02);
}
