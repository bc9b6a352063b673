#include <gtest/gtest.h>

#include <cmath>

#include "pqcalc/errors.hpp"
#include "pqcalc/laplace.hpp"
#include "pqcalc/solver.hpp"

using namespace pqcalc;

namespace {

const PQBase kBase(1.2, 0.8);
const std::vector<double> kPoints = {0.1, 0.25, 0.5, 1.0};

}  // namespace

TEST(Problem, Validation) {
    PQCauchyProblem pr = first_order_problem(0.7);
    EXPECT_NO_THROW(pr.validate());
    pr.dilation_exponent = 2;
    EXPECT_THROW(pr.validate(), DomainError);
    pr.order = 3;
    pr.dilation_exponent = 3;
    EXPECT_THROW(pr.validate(), DomainError);
    EXPECT_NO_THROW(oscillator_problem(1.0, 0.0, 1.0).validate());
}

TEST(SolveFirstOrder, Examples) {
    EXPECT_EQ(solve_first_order(first_order_problem(0.7), kBase), FunctionExpr(fn::ExpSmall{-0.7}));
    EXPECT_EQ(solve_first_order(resonant_problem(0.5, kBase), kBase),
              FunctionExpr(fn::MonomialTimesExpSmall{1, 0.5}));
    EXPECT_EQ(solve_first_order(first_order_problem(0.0), kBase), FunctionExpr(fn::Const{1.0}));
}

TEST(SolveFirstOrder, InitialValueScalesSolution) {
    const FunctionExpr f = solve_first_order(first_order_problem(0.7, 2.5), kBase);
    EXPECT_EQ(f, FunctionExpr::sum({{2.5, fn::ExpSmall{-0.7}}}));
}

TEST(SolveFirstOrder, ResonantIntermediateTransform) {
    const double lambda = 0.5;
    const auto detailed = solve_first_order_detailed(resonant_problem(lambda, kBase), kBase);
    // p^2 / ((ps - lambda)(p^2 s - lambda q))
    TransformExpr expected(kBase, TransformKind::FirstKind);
    expected.add(1.0, RationalTerm{-1, 0, 0, 0, {{lambda, -1, 0}, {lambda, -2, 1}}});
    EXPECT_TRUE(detailed.transform.structurally_equal(expected)) << to_string(detailed.transform);
    for (double s : {0.6, 1.0, 2.5}) {
        EXPECT_NEAR(detailed.transform(s), 1.44 / ((1.2 * s - lambda) * (1.44 * s - lambda * 0.8)), 1e-14);
    }
}

TEST(SolveFirstOrder, RejectsOtherForcing) {
    PQCauchyProblem pr = first_order_problem(0.7);
    pr.forcing = fn::Cos{0.3};
    EXPECT_THROW(solve_first_order(pr, kBase), UnsupportedError);
    EXPECT_THROW(solve_first_order(oscillator_problem(1.0, 0.0, 1.0), kBase), UnsupportedError);
}

TEST(SolveOscillator, Examples) {
    const double k = 1.0 / std::sqrt(1.2);
    EXPECT_EQ(solve_oscillator(1.0, 0.0, 1.0, kBase), FunctionExpr(fn::Cos{k}));
    EXPECT_EQ(solve_oscillator(1.0, 1.0, 0.0, kBase), FunctionExpr::sum({{std::sqrt(1.2), fn::Sin{k}}}));
    const FunctionExpr zero = solve_oscillator(2.0, 0.0, 0.0, kBase);
    for (double t : {0.1, 0.7}) EXPECT_EQ(evaluate(zero, kBase, t), 0.0);
    EXPECT_THROW(solve_oscillator(0.0, 1.0, 1.0, kBase), DomainError);
    EXPECT_THROW(solve_oscillator(-1.0, 1.0, 1.0, kBase), DomainError);
}

TEST(SolveOscillator, GeneralForm) {
    const double omega = 1.0, A = 1.0, B = 2.0;
    const double k = omega / std::sqrt(1.2);
    const FunctionExpr f = solve_oscillator(omega, A, B, kBase);
    const FunctionExpr expected = FunctionExpr::sum({{B, fn::Cos{k}}, {A * std::sqrt(1.2) / omega, fn::Sin{k}}});
    for (double t : {0.1, 0.4, 1.3}) EXPECT_NEAR(evaluate(f, kBase, t), evaluate(expected, kBase, t), 1e-15);
}

TEST(VerifySolution, Examples) {
    const auto hom = verify_solution(first_order_problem(0.7), fn::ExpSmall{-0.7}, kBase, {0.1, 0.5, 1.0});
    EXPECT_LT(hom.max_abs_residual, 1e-9);
    EXPECT_TRUE(hom.passed);

    const auto osc_pr = oscillator_problem(1.0, 1.0, 2.0);
    const auto osc = verify_solution(osc_pr, solve_oscillator(1.0, 1.0, 2.0, kBase), kBase, {0.1, 0.3});
    EXPECT_LT(osc.max_abs_residual, 1e-8);
    EXPECT_TRUE(osc.passed);

    const auto wrong = verify_solution(first_order_problem(0.7), fn::Const{1.0}, kBase, {1.0});
    EXPECT_NEAR(wrong.max_abs_residual, 0.7, 1e-15);
    EXPECT_FALSE(wrong.passed);
}

TEST(VerifySolution, ReportShape) {
    const auto r = verify_solution(first_order_problem(0.7), fn::ExpSmall{-0.7}, kBase, kPoints);
    ASSERT_EQ(r.sample_points, kPoints);
    ASSERT_EQ(r.per_point.size(), kPoints.size());
    double mx = 0.0;
    for (double v : r.per_point) mx = std::max(mx, v);
    EXPECT_EQ(r.max_abs_residual, mx);
}

TEST(VerifySolution, InitialDataChecked) {
    // Right equation, wrong initial value.
    const auto r = verify_solution(first_order_problem(0.7, 1.0), FunctionExpr::sum({{2.0, fn::ExpSmall{-0.7}}}),
                                   kBase, kPoints);
    EXPECT_LT(r.max_abs_residual, 1e-9);
    EXPECT_NEAR(r.initial_value_error, 1.0, 1e-15);
    EXPECT_FALSE(r.passed);
    // Oscillator with the wrong slope.
    const auto o = verify_solution(oscillator_problem(1.0, 1.0, 2.0), solve_oscillator(1.0, 3.0, 2.0, kBase), kBase,
                                   {0.1});
    EXPECT_NEAR(o.initial_derivative_error, 2.0, 1e-12);
    EXPECT_FALSE(o.passed);
}

TEST(VerifySolution, Errors) {
    EXPECT_THROW(verify_solution(first_order_problem(0.7), fn::ExpSmall{-0.7}, kBase, {0.0}), DomainError);
    EXPECT_THROW(verify_solution(first_order_problem(0.7), fn::ExpSmall{-0.7}, kBase, {-1.0}), DomainError);
    // Stencil argument 0.7 * p * t leaves the radius 3.
    EXPECT_THROW(verify_solution(first_order_problem(0.7), fn::ExpSmall{-0.7}, kBase, {5.0}), DomainError);
}

TEST(Solver, AllSolutionsPassOnBothBases) {
    for (const PQBase& base : {PQBase(1.1, 0.66), PQBase(1.2, 0.72)}) {
        const std::vector<PQCauchyProblem> problems = {
            first_order_problem(0.7),
            first_order_problem(0.0),
            first_order_problem(-0.4, 3.0),
            resonant_problem(0.5, base),
            oscillator_problem(1.0, 0.0, 1.0),
            oscillator_problem(1.0, 1.0, 0.0),
            oscillator_problem(1.0, 1.0, 2.0),
        };
        for (const auto& pr : problems) {
            const FunctionExpr f = solve(pr, base);
            const auto r = verify_solution(pr, f, base, kPoints);
            EXPECT_LT(r.max_abs_residual, 1e-8) << to_string(f) << " p=" << base.p();
            EXPECT_EQ(r.initial_value_error, 0.0) << to_string(f);
            EXPECT_EQ(r.initial_derivative_error, 0.0) << to_string(f);
            EXPECT_TRUE(r.passed);
        }
    }
}
