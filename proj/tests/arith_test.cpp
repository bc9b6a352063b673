#include <gtest/gtest.h>

#include <cmath>

#include "pqcalc/arith.hpp"
#include "pqcalc/errors.hpp"

using namespace pqcalc;

namespace {

const PQBase kBase(1.2, 0.8);
const PQBase kTwoOne(2.0, 1.0);

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(PQBase, Regimes) {
    EXPECT_EQ(kBase.regime(), Regime::FullGrid);
    EXPECT_DOUBLE_EQ(kBase.ratio(), 0.8 / 1.2);
    EXPECT_EQ(PQBase(0.9, 0.5).regime(), Regime::SeriesOnly);  // p < 1
    EXPECT_EQ(PQBase(0.8, 1.2).regime(), Regime::SeriesOnly);  // q > p
    EXPECT_EQ(PQBase(1.0, 0.5).regime(), Regime::FullGrid);
    EXPECT_EQ(kBase.swapped().regime(), Regime::SeriesOnly);
    EXPECT_THROW(PQBase(1.0, 1.0), DomainError);
    EXPECT_THROW(PQBase(NAN, 0.5), DomainError);
    EXPECT_THROW(PQBase(0.9, 0.5).require_full_grid("test"), DomainError);
    EXPECT_NO_THROW(kBase.require_full_grid("test"));
}

TEST(SeriesTruncation, Validation) {
    SeriesTruncation t;
    EXPECT_NO_THROW(t.validate());
    t.max_terms = 0;
    EXPECT_THROW(t.validate(), DomainError);
    t = {};
    t.abs_tol = 0.0;
    t.rel_tol = 0.0;
    EXPECT_THROW(t.validate(), DomainError);
}

TEST(PQNumber, Examples) {
    EXPECT_DOUBLE_EQ(pq_number(kTwoOne, 3), 7.0);
    EXPECT_EQ(pq_number(kBase, 0), 0.0);
    EXPECT_EQ(pq_number(kBase, 1), 1.0);
    EXPECT_NEAR(pq_number(kBase, 3), 3.04, 1e-14);
}

TEST(PQNumber, QLimitAtPEqualsOne) {
    const PQBase b(1.0, 0.5);
    for (int n = 0; n <= 40; ++n) {
        EXPECT_NEAR(pq_number(b, n), (1.0 - std::pow(0.5, n)) / 0.5, 1e-14) << n;
    }
}

TEST(PQNumber, Recurrence) {
    for (const PQBase& b : {kBase, PQBase(1.5, 0.9), PQBase(1.1, 0.66)}) {
        for (int n = 0; n <= 30; ++n) {
            const double next = pq_number(b, n + 1);
            EXPECT_LT(rel(b.p() * pq_number(b, n) + std::pow(b.q(), n), next), 1e-12);
            EXPECT_LT(rel(b.q() * pq_number(b, n) + std::pow(b.p(), n), next), 1e-12);
        }
    }
}

TEST(PQNumber, RealArgumentMatchesInteger) {
    for (int n = 0; n <= 10; ++n) EXPECT_NEAR(pq_number_real(kBase, n), pq_number(kBase, n), 1e-12);
    EXPECT_NEAR(pq_number_real(kBase, 0.5), (std::sqrt(1.2) - std::sqrt(0.8)) / 0.4, 1e-15);
}

TEST(PQFactorial, Examples) {
    EXPECT_DOUBLE_EQ(pq_factorial(kTwoOne, 4), 315.0);
    EXPECT_EQ(pq_factorial(kBase, 0), 1.0);
    EXPECT_EQ(pq_factorial(PQBase(3.0, 0.1), 0), 1.0);
    EXPECT_NEAR(pq_factorial(kBase, 3), 6.08, 1e-13);
}

TEST(PQFactorial, RangeCap) {
    EXPECT_THROW(pq_factorial(kBase, 10001), RangeError);
    EXPECT_THROW(pq_factorial(kTwoOne, 2000), RangeError);  // overflows double
    EXPECT_THROW(pq_factorial(kBase, -1), DomainError);
}

TEST(PQBinomial, Examples) {
    EXPECT_DOUBLE_EQ(pq_binomial(kTwoOne, 4, 2), 35.0);
    EXPECT_EQ(pq_binomial(kBase, 5, 0), 1.0);
    EXPECT_DOUBLE_EQ(pq_binomial(kTwoOne, 4, 3), 15.0);
    EXPECT_DOUBLE_EQ(pq_binomial(kTwoOne, 4, 1), 15.0);
    EXPECT_THROW(pq_binomial(kBase, 4, 5), DomainError);
    EXPECT_THROW(pq_binomial(kBase, 4, -1), DomainError);
}

TEST(PQBinomial, Symmetry) {
    for (const PQBase& b : {kBase, kTwoOne, PQBase(1.5, 0.9)}) {
        for (int n = 0; n <= 25; ++n) {
            for (int k = 0; k <= n; ++k) {
                EXPECT_LT(rel(pq_binomial(b, n, k), pq_binomial(b, n, n - k)), 4e-16) << n << "," << k;
            }
        }
    }
}

TEST(PQPowerFinite, Examples) {
    EXPECT_EQ(pq_power_finite(kBase, 1.0, 1.0, 2, PowerSign::Minus), 0.0);
    EXPECT_DOUBLE_EQ(pq_power_finite(kTwoOne, 1.0, 0.0, 3, PowerSign::Minus), 8.0);
    EXPECT_EQ(pq_power_finite(kBase, 3.0, 2.0, 0, PowerSign::Plus), 1.0);
    EXPECT_EQ(pq_power_finite(kBase, 3.0, 2.0, 0, PowerSign::Minus), 1.0);
    // (x (+) a)^2 = (x + a)(px + qa)
    EXPECT_NEAR(pq_power_finite(kBase, 2.0, 0.5, 2, PowerSign::Plus), 2.5 * (2.4 + 0.4), 1e-14);
}

TEST(PQPowerFinite, ZeroShiftIsScaledPower) {
    for (int n = 0; n <= 20; ++n) {
        const double x = 1.7;
        const double expected = std::pow(1.2, n * (n - 1) / 2.0) * std::pow(x, n);
        EXPECT_LT(rel(pq_power_finite(kBase, x, 0.0, n, PowerSign::Minus), expected), 1e-13) << n;
    }
}

TEST(PochhammerInf, Examples) {
    EXPECT_EQ(pochhammer_inf(0.5, 0.0), 1.0);
    // The k = 0 factor (1 - 1) vanishes.
    EXPECT_EQ(pochhammer_inf(0.5, 1.0), 0.0);
    // (0.5; 0.5)_inf, the value quoted for the example above.
    EXPECT_NEAR(pochhammer_inf(0.5, 0.5), 0.2887880951, 1e-10);
    const double v = pochhammer_inf(0.9, 2.0);
    EXPECT_LT(v, 0.0);
    EXPECT_LT(std::abs(v), 1.0);
}

TEST(PochhammerInf, MatchesLongProduct) {
    // Independent oracle: 2000-factor product in long double.
    for (double z : {-3.0, -0.7, 0.3, 0.95, 1.7}) {
        long double prod = 1.0L;
        long double rk = 1.0L;
        for (int k = 0; k < 2000; ++k) {
            prod *= 1.0L - z * rk;
            rk *= 0.6L;
        }
        EXPECT_NEAR(pochhammer_inf(0.6, z), static_cast<double>(prod), 1e-14 * std::max(1.0, std::abs((double)prod)));
    }
}

TEST(PochhammerInf, Errors) {
    EXPECT_THROW(pochhammer_inf(1.0, 0.5), DomainError);
    EXPECT_THROW(pochhammer_inf(-1.5, 0.5), DomainError);
    SeriesTruncation tight;
    tight.max_terms = 3;
    try {
        pochhammer_inf(0.99, 0.5, tight);
        FAIL() << "expected TruncationError";
    } catch (const TruncationError& e) {
        EXPECT_EQ(e.terms(), 3);
        EXPECT_NE(e.partial(), 0.0);
    }
}

TEST(PochhammerInf, Complex) {
    const std::complex<double> z(0.3, 0.4);
    const auto v = pochhammer_inf(0.5, z);
    std::complex<double> prod = 1.0;
    double rk = 1.0;
    for (int k = 0; k < 200; ++k) {
        prod *= 1.0 - z * rk;
        rk *= 0.5;
    }
    EXPECT_NEAR(std::abs(v - prod), 0.0, 1e-15);
}

TEST(PQPowerInfinitePartial, Examples) {
    // prod_{k<3} (p^{k+1} - q^{k+1}) = 0.4 * 0.8 * 1.216
    EXPECT_NEAR(pq_power_infinite_partial(kBase, 1.2, 0.8, PowerSign::Minus, 3), 0.4 * 0.8 * 1.216, 1e-14);
    // k = 1..3 gives the longer product 0.8 * 1.216 * 1.664.
    EXPECT_NEAR(pq_power_infinite_partial(kBase, 1.2 * 1.2, 0.8 * 0.8, PowerSign::Minus, 3), 0.8 * 1.216 * 1.664,
                1e-13);
    EXPECT_EQ(pq_power_infinite_partial(kBase, 0.0, 0.0, PowerSign::Minus, 5), 0.0);
    EXPECT_EQ(pq_power_infinite_partial(kTwoOne, 1.0, 1.0, PowerSign::Minus, 1), 0.0);
}

TEST(Choose2, Values) {
    EXPECT_EQ(choose2(0), 0);
    EXPECT_EQ(choose2(1), 0);
    EXPECT_EQ(choose2(4), 6);
}
