#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pqcalc/arith.hpp"
#include "pqcalc/calculus.hpp"
#include "pqcalc/errors.hpp"
#include "pqcalc/special.hpp"

using namespace pqcalc;

namespace {

const PQBase kBase(1.2, 0.8);
const PQBase kTwoOne(2.0, 1.0);

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(GridConfig, Validation) {
    GridConfig g;
    EXPECT_NO_THROW(g.validate());
    g.j_min = 1;
    EXPECT_THROW(g.validate(), DomainError);
    g = {};
    g.abs_tol = 0.0;
    EXPECT_THROW(g.validate(), DomainError);
    g = {};
    g.consecutive_small = 0;
    EXPECT_THROW(g.validate(), DomainError);
}

TEST(PQDerivative, Examples) {
    EXPECT_NEAR(pq_derivative([](double t) { return t * t; }, kBase, 3.0), 6.0, 1e-13);
    EXPECT_EQ(pq_derivative([](double) { return 5.0; }, kBase, 2.0), 0.0);
    EXPECT_NEAR(pq_derivative([](double t) { return 1.0 / t; }, kBase, 1.0), -1.0 / 0.96, 1e-14);
}

TEST(PQDerivative, AtZeroIsOrdinaryDerivative) {
    EXPECT_NEAR(pq_derivative([](double t) { return std::sin(t); }, kBase, 0.0), 1.0, 1e-10);
    EXPECT_NEAR(pq_derivative([](double t) { return 3.0 * t + t * t; }, kBase, 0.0), 3.0, 1e-10);
}

TEST(PQDerivativeIterated, Examples) {
    EXPECT_NEAR(pq_derivative_iterated([](double t) { return t * t * t; }, kTwoOne, 3, 1.0), 21.0, 1e-12);
    EXPECT_NEAR(pq_derivative_iterated([](double t) { return 1.0 / t; }, kBase, 2, 1.0), 2.0 / 0.884736, 1e-12);
    EXPECT_EQ(pq_derivative_iterated([](double t) { return t * t + 1.0; }, kBase, 0, 1.5), 1.5 * 1.5 + 1.0);
    EXPECT_THROW(pq_derivative_iterated([](double t) { return t * t; }, kBase, 2, 0.0), DomainError);
}

TEST(PQDerivativeIterated, MonomialGivesFactorial) {
    for (int n = 1; n <= 6; ++n) {
        auto f = [n](double t) { return std::pow(t, n); };
        EXPECT_LT(rel(pq_derivative_iterated(f, kBase, n, 0.7), pq_factorial(kBase, n)), 1e-10) << n;
    }
}

TEST(DerivReciprocalClosed, Examples) {
    EXPECT_NEAR(deriv_reciprocal_closed(kBase, 1.0, 0.0, 1, 1.0), -1.0 / 0.96, 1e-14);
    EXPECT_NEAR(deriv_reciprocal_closed(kBase, 2.0, 1.0, 0, 3.0), 1.0 / 7.0, 1e-15);
    EXPECT_NEAR(deriv_reciprocal_closed(kTwoOne, 1.0, 1.0, 1, 1.0), -1.0 / 6.0, 1e-15);
}

TEST(DerivReciprocalClosed, SingularityNamesFactor) {
    // a p^{n-k} q^k x + b = 0 at k = 1 for n = 2: 1.2*0.8*x = 1 -> x = 1/0.96, b = -1.
    try {
        deriv_reciprocal_closed(kBase, 1.0, -1.0, 2, 1.0 / 0.96);
        FAIL() << "expected SingularityError";
    } catch (const SingularityError& e) {
        EXPECT_EQ(e.index(), 1);
    }
}

TEST(DerivReciprocalClosed, MatchesIteratedStencil) {
    for (double a : {1.0, 2.0}) {
        for (double b : {0.0, 1.0}) {
            for (double x : {0.5, 1.0, 2.0}) {
                auto f = [=](double t) { return 1.0 / (a * t + b); };
                for (int n = 0; n <= 6; ++n) {
                    const double closed = deriv_reciprocal_closed(kBase, a, b, n, x);
                    EXPECT_LT(rel(pq_derivative_iterated(f, kBase, n, x), closed), 1e-10)
                        << "a=" << a << " b=" << b << " x=" << x << " n=" << n;
                }
            }
        }
    }
}

TEST(DerivReciprocalClosed, ReducesToPureReciprocal) {
    for (int n = 0; n <= 6; ++n) {
        const double x = 1.3;
        const double sign = n % 2 == 0 ? 1.0 : -1.0;
        const double formula =
            sign * pq_factorial(kBase, n) / (std::pow(0.96, static_cast<double>(choose2(n + 1))) * std::pow(x, n + 1));
        EXPECT_LT(rel(deriv_reciprocal_closed(kBase, 1.0, 0.0, n, x), formula), 1e-13) << n;
    }
}

TEST(ProductRules, RandomizedPoints) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(0.1, 10.0);
    const double p = kBase.p();
    const double q = kBase.q();
    auto f = [](double t) { return t * t; };
    auto g = [](double t) { return t * t * t; };
    auto fg = [&](double t) { return f(t) * g(t); };
    auto h = [](double t) { return 1.0 + t * t; };
    auto g_over_h = [&](double t) { return g(t) / h(t); };
    auto D = [&](auto fn, double x) { return pq_derivative(fn, kBase, x); };
    for (int i = 0; i < 50; ++i) {
        const double x = dist(rng);
        const double lhs = D(fg, x);
        EXPECT_LT(rel(f(p * x) * D(g, x) + g(q * x) * D(f, x), lhs), 1e-12);
        EXPECT_LT(rel(g(p * x) * D(f, x) + f(q * x) * D(g, x), lhs), 1e-12);
        const double quot = D(g_over_h, x);
        EXPECT_LT(rel((h(q * x) * D(g, x) - g(q * x) * D(h, x)) / (h(p * x) * h(q * x)), quot), 1e-12);
        EXPECT_LT(rel((h(p * x) * D(g, x) - g(p * x) * D(h, x)) / (h(p * x) * h(q * x)), quot), 1e-12);
    }
}

TEST(PQIntegralFinite, Examples) {
    EXPECT_NEAR(pq_integral_finite([](double) { return 1.0; }, kBase, 1.0).value, 1.0, 1e-14);
    EXPECT_NEAR(pq_integral_finite([](double t) { return t; }, kBase, 1.0).value, 0.5, 1e-14);
    EXPECT_EQ(pq_integral_finite([](double) { return 1.0; }, kBase, 0.0).value, 0.0);
    EXPECT_THROW(pq_integral_finite([](double) { return 1.0; }, PQBase(0.9, 0.5), 1.0), DomainError);
}

TEST(PQIntegralFinite, MonomialAntiderivative) {
    // int_0^b t^n = b^{n+1}/[n+1]
    for (int n = 0; n <= 6; ++n) {
        const double b = 1.7;
        const auto r = pq_integral_finite([n](double t) { return std::pow(t, n); }, kBase, b);
        EXPECT_LT(rel(r.value, std::pow(b, n + 1) / pq_number(kBase, n + 1)), 1e-13) << n;
        EXPECT_GT(r.terms_used, 0);
    }
}

TEST(PQIntegralInterval, Examples) {
    EXPECT_NEAR(pq_integral_interval([](double) { return 1.0; }, kBase, 0.5, 1.0).value, 0.5, 1e-14);
    EXPECT_EQ(pq_integral_interval([](double t) { return t; }, kBase, 1.0, 1.0).value, 0.0);
    auto g = [](double t) { return t * t; };
    auto dg = [&](double x) { return pq_derivative(g, kBase, x); };
    EXPECT_NEAR(pq_integral_interval(dg, kBase, 0.0, 1.0).value, 1.0, 1e-13);
    EXPECT_THROW(pq_integral_interval([](double) { return 1.0; }, kBase, 1.0, 0.5), DomainError);
}

TEST(PQIntegral, FundamentalTheorem) {
    for (int n = 1; n <= 5; ++n) {
        auto F = [n](double t) { return std::pow(t, n); };
        auto dF = [&](double x) { return pq_derivative(F, kBase, x); };
        const double b = 1.4;
        EXPECT_LT(rel(pq_integral_finite(dF, kBase, b).value, F(b)), 1e-13) << n;
    }
}

TEST(PQIntegral, IntegrationByParts) {
    const double p = kBase.p();
    const double q = kBase.q();
    auto f = [](double t) { return t; };
    auto g = [](double t) { return t * t; };
    auto D = [&](auto fn, double x) { return pq_derivative(fn, kBase, x); };
    const double lhs = pq_integral_interval([&](double x) { return f(p * x) * D(g, x); }, kBase, 0.0, 1.0).value;
    const double rhs = f(1.0) * g(1.0) - f(0.0) * g(0.0) -
                       pq_integral_interval([&](double x) { return g(q * x) * D(f, x); }, kBase, 0.0, 1.0).value;
    EXPECT_NEAR(lhs, rhs, 1e-10);
}

TEST(PQIntegralImproper, Examples) {
    EXPECT_EQ(pq_integral_improper([](double) { return 0.0; }, kBase).value, 0.0);
    // int e(-pt) = 1 and int t e(-pt) = 1/q (second-kind kernel).
    const double p = kBase.p();
    EXPECT_NEAR(pq_integral_improper([&](double t) { return exp_small(kBase, -p * t); }, kBase).value, 1.0, 1e-12);
    EXPECT_NEAR(pq_integral_improper([&](double t) { return t * exp_small(kBase, -p * t); }, kBase).value, 1.0 / 0.8,
                1e-12);
}

TEST(PQIntegralImproper, FirstKindKernelDivergesOnStandardGrid) {
    // E(-qt) grows without bound on the standard grid; the sum must refuse.
    const double q = kBase.q();
    try {
        pq_integral_improper([&](double t) { return exp_big(kBase, -q * t); }, kBase);
        FAIL() << "expected TruncationError";
    } catch (const ConvergenceError& e) {
        EXPECT_EQ(e.where(), "left tail");
    }
}

TEST(PQIntegralImproper, FirstKindKernelOnAnchoredGrid) {
    // E(-qt) vanishes on the grid anchored at p/(p-q) beyond that point.
    const double q = kBase.q();
    const double A = kBase.p() / (kBase.p() - q);
    EXPECT_NEAR(pq_integral_finite([&](double t) { return exp_big(kBase, -q * t); }, kBase, A).value, 1.0, 1e-13);
    EXPECT_NEAR(pq_integral_finite([&](double t) { return t * exp_big(kBase, -q * t); }, kBase, A).value, 1.0 / 1.2,
                1e-13);
}

TEST(PQIntegralImproper, SlowDecayRaisesTruncation) {
    GridConfig g;
    g.j_min = -30;
    g.j_max = 30;
    EXPECT_THROW(pq_integral_improper([](double t) { return 1.0 / (1.0 + t); }, kBase, g), TruncationError);
}

TEST(PQIntegralImproper, ChangeOfVariable) {
    // int f(alpha t) on the grid anchored at c = (1/alpha) int f on the grid anchored at alpha c.
    const double p = kBase.p();
    auto f = [&](double t) { return exp_small(kBase, -p * t); };
    for (double alpha : {0.5, 2.0}) {
        GridConfig scaled;
        scaled.anchor = alpha;
        const double lhs = pq_integral_improper([&](double t) { return f(alpha * t); }, kBase).value;
        const double rhs = pq_integral_improper(f, kBase, scaled).value / alpha;
        EXPECT_LT(rel(lhs, rhs), 1e-9) << alpha;
    }
    // alpha = p/q maps the standard grid to itself.
    const double alpha = p / kBase.q();
    const double lhs = pq_integral_improper([&](double t) { return f(alpha * t); }, kBase).value;
    EXPECT_LT(rel(lhs, pq_integral_improper(f, kBase).value / alpha), 1e-9);
}

TEST(PQIntegralImproperLog, MatchesPlainSum) {
    const double p = kBase.p();
    const auto plain = pq_integral_improper([&](double t) { return t * t * exp_small(kBase, -p * t); }, kBase);
    const auto logged = pq_integral_improper_log(
        [&](double t) {
            LogValue v = exp_small_log(kBase, -p * t);
            v.log_abs += 2.0 * std::log(t);
            return v;
        },
        kBase);
    EXPECT_LT(rel(logged.value, plain.value), 1e-13);
}
