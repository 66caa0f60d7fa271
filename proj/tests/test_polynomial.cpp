#include "tracenet/error.hpp"
#include "tracenet/polynomial.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace tracenet;

TEST(IntPolynomial, TrimsTrailingZeros) {
    IntPolynomial p{1, 2, 0, 0};
    EXPECT_EQ(p.degree(), 1);
    EXPECT_EQ(p.coefficients().size(), 2u);
    EXPECT_TRUE((IntPolynomial{0, 0}).is_zero());
    EXPECT_EQ((IntPolynomial{1, 1} - IntPolynomial{0, 1}), IntPolynomial{1});
}

TEST(IntPolynomial, ArithmeticAndPrinting) {
    const IntPolynomial a{1, -1};
    const IntPolynomial b{1, -2};
    EXPECT_EQ(a * b, (IntPolynomial{1, -3, 2}));
    EXPECT_EQ((IntPolynomial{1, -5, 5}).to_string(), "1 - 5z + 5z^2");
    EXPECT_EQ((IntPolynomial{0, -1, 0, 2}).to_string(), "-z + 2z^3");
    EXPECT_EQ(IntPolynomial{}.to_string(), "0");
    EXPECT_DOUBLE_EQ((IntPolynomial{1, -5, 5})(0.5), 1 - 2.5 + 1.25);
}

TEST(IntPolynomial, OverflowThrows) {
    const IntPolynomial big{std::numeric_limits<std::int64_t>::max()};
    EXPECT_THROW(big + IntPolynomial{1}, std::overflow_error);
    EXPECT_THROW(big * IntPolynomial{2}, std::overflow_error);
}

TEST(Determinant, FactoredThetaOfTheWorkedExample) {
    // M(z) of the two-marking example; det = (1-z)(1-2z)(1-2z-z^2).
    const PolyMatrix m{{IntPolynomial{1, -3, 2}, IntPolynomial{0, -1, 2}},
                       {IntPolynomial{0, -1, 1}, IntPolynomial{1, -2}}};
    const auto factored = IntPolynomial{1, -1} * IntPolynomial{1, -2} * IntPolynomial{1, -2, -1};
    EXPECT_EQ(factored, (IntPolynomial{1, -5, 7, -1, -2}));
    EXPECT_EQ(bareiss_determinant(m), factored);
    EXPECT_EQ(cofactor_determinant(m), factored);
}

TEST(Determinant, BareissAgreesWithLeibnizOnRandomMatrices) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> coeff(-3, 3);
    std::uniform_int_distribution<int> deg(-1, 2);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 5;
        PolyMatrix m(n, std::vector<IntPolynomial>(n));
        for (auto& row : m)
            for (auto& e : row) {
                std::vector<std::int64_t> c;
                for (int k = 0; k <= deg(rng); ++k) c.push_back(coeff(rng));
                e = IntPolynomial(c);
            }
        const auto want = oracle::leibniz_determinant(m);
        ASSERT_EQ(bareiss_determinant(m), want) << "trial " << trial;
        ASSERT_EQ(cofactor_determinant(m), want) << "trial " << trial;
    }
}

TEST(Determinant, SingularAndEmpty) {
    const PolyMatrix zero_row{{IntPolynomial{}, IntPolynomial{}}, {IntPolynomial{1}, IntPolynomial{0, 1}}};
    EXPECT_TRUE(bareiss_determinant(zero_row).is_zero());
    EXPECT_EQ(bareiss_determinant(PolyMatrix{}), IntPolynomial{1});
}

TEST(SmallestRoot, MonoidPolynomial) {
    const auto r = smallest_root(IntPolynomial{1, -5, 5}, 0.0, 1.0, 1e-12);
    const double want = 0.5 - 1.0 / (2.0 * std::sqrt(5.0));
    EXPECT_LE(r.width(), 1e-12);
    EXPECT_LE(r.lower, want);
    EXPECT_GE(r.upper, want);
    EXPECT_NEAR(r.midpoint, want, 1e-12);
}

TEST(SmallestRoot, ThetaOfTheWorkedExample) {
    const IntPolynomial theta{1, -5, 7, -1, -2};
    const auto r = smallest_root(theta, 0.0, 1.0, 1e-13);
    EXPECT_NEAR(r.midpoint, oracle::kSqrt2 - 1.0, 1e-12);
    EXPECT_NEAR(r.midpoint, oracle::bisect(theta, 0.3, 0.45), 1e-12);
    EXPECT_EQ(count_roots(theta, 0.0, r.lower), 0u);
}

TEST(SmallestRoot, RootAtTheUpperEnd) {
    const auto r = smallest_root(IntPolynomial{1, -1}, 0.0, 1.0, 1e-12);
    EXPECT_NEAR(r.midpoint, 1.0, 1e-12);
    EXPECT_GE(r.upper, 1.0);
}

TEST(SmallestRoot, DoubleRoot) {
    // (1 - z)^2: no sign change, only the Sturm count sees it.
    const auto r = smallest_root(IntPolynomial{1, -2, 1}, 0.0, 1.0, 1e-12);
    EXPECT_NEAR(r.midpoint, 1.0, 1e-12);
    const auto s = smallest_root(IntPolynomial{1, -2} * IntPolynomial{1, -2} * IntPolynomial{1, -1}, 0.0, 1.0, 1e-12);
    EXPECT_NEAR(s.midpoint, 0.5, 1e-12);
}

TEST(SmallestRoot, DyadicRootIsExact) {
    const auto r = smallest_root(IntPolynomial{1, -4}, 0.0, 1.0, 1e-12);
    EXPECT_NEAR(r.midpoint, 0.25, 1e-15);
}

TEST(SmallestRoot, Failures) {
    EXPECT_THROW(smallest_root(IntPolynomial{1, 1}, 0.0, 1.0, 1e-12), NumericFailure);
    EXPECT_THROW(smallest_root(IntPolynomial{1, -5, 5}, 0.0, 1.0, 0.0), NumericFailure);
    EXPECT_THROW(smallest_root(IntPolynomial{1, -5, 5}, 0.0, 1.0, 1e-20), NumericFailure);
    EXPECT_THROW(count_roots(IntPolynomial{}, 0.0, 1.0), std::invalid_argument);
}

TEST(CountRoots, SeparatedRoots) {
    // Roots 1/4, 1/3, 1/2.
    const auto p = IntPolynomial{1, -4} * IntPolynomial{1, -3} * IntPolynomial{1, -2};
    EXPECT_EQ(count_roots(p, 0.0, 1.0), 3u);
    EXPECT_EQ(count_roots(p, 0.0, 0.3), 1u);
    EXPECT_EQ(count_roots(p, 0.3, 0.4), 1u);
    EXPECT_EQ(count_roots(p, 0.6, 1.0), 0u);
}
