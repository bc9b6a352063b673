#include "pqcalc/solver.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "pqcalc/calculus.hpp"
#include "pqcalc/errors.hpp"
#include "pqcalc/laplace.hpp"
#include "pqcalc/special.hpp"

namespace pqcalc {

void PQCauchyProblem::validate() const {
    if (order != 1 && order != 2) throw DomainError(fmt::format("problem order must be 1 or 2 (got {})", order));
    if (dilation_exponent != order) {
        throw DomainError(fmt::format("order {} problems use f(p^{} t), not f(p^{} t)", order, order,
                                      dilation_exponent));
    }
    if (!std::isfinite(coefficient) || !std::isfinite(initial_value) || !std::isfinite(initial_derivative)) {
        throw DomainError("problem parameters must be finite");
    }
}

PQCauchyProblem first_order_problem(double c, double f0) {
    PQCauchyProblem p;
    p.coefficient = c;
    p.initial_value = f0;
    return p;
}

PQCauchyProblem resonant_problem(double lambda, const PQBase& base, double h0) {
    PQCauchyProblem p;
    p.coefficient = -lambda;
    p.forcing = fn::ExpSmall{lambda * base.q()};
    p.initial_value = h0;
    return p;
}

PQCauchyProblem oscillator_problem(double omega, double A, double B) {
    PQCauchyProblem p;
    p.order = 2;
    p.dilation_exponent = 2;
    p.coefficient = omega * omega;
    p.initial_value = B;
    p.initial_derivative = A;
    return p;
}

namespace {

bool is_zero_function(const FunctionExpr& f) {
    for (const auto& e : f.terms()) {
        const auto* c = std::get_if<fn::Const>(&e.atom);
        if (!c || e.coeff * c->c != 0.0) return false;
    }
    return true;
}

// The single ExpSmall(b) inside f, if that is all f is.
const fn::ExpSmall* lone_exp_small(const FunctionExpr& f) {
    if (f.is_sum()) return nullptr;
    return std::get_if<fn::ExpSmall>(&f.atom());
}

}  // namespace

FirstOrderSolution solve_first_order_detailed(const PQCauchyProblem& problem, const PQBase& base) {
    problem.validate();
    if (problem.order != 1) throw UnsupportedError("solve_first_order needs an order-1 problem");
    base.require_full_grid("solve_first_order");
    const double c = problem.coefficient;

    TransformExpr numerator(base, TransformKind::FirstKind);
    if (problem.initial_value != 0.0) numerator.add(problem.initial_value, RationalTerm{});
    if (!is_zero_function(problem.forcing)) {
        const auto* g = lone_exp_small(problem.forcing);
        const double resonant = -c * base.q();
        if (!g || std::abs(g->a - resonant) > 1e-12 * std::max(1.0, std::abs(resonant))) {
            throw UnsupportedError(fmt::format(
                "forcing {} is outside the solvable family (zero or e({}t))", to_string(problem.forcing),
                resonant));
        }
        // L{g}(ps)
        numerator.append(substitute_scale(transform_table(problem.forcing, base, TransformKind::FirstKind), 1, 0));
    }
    // (s/p) F(s/p) - f0 + (c/p) F(s/p) = G(s)  =>  F(s) = (f0 + G(ps)) / (s + c/p).
    TransformExpr F = divide_by_factor(numerator, LinearFactor{-c, -1, 0});
    FunctionExpr f = invert_by_table(F);
    return {std::move(F), std::move(f)};
}

FunctionExpr solve_first_order(const PQCauchyProblem& problem, const PQBase& base) {
    return solve_first_order_detailed(problem, base).solution;
}

FunctionExpr solve_oscillator(double omega, double A, double B, const PQBase& base) {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw DomainError(fmt::format("oscillator needs omega > 0 (got {})", omega));
    }
    base.require_full_grid("solve_oscillator");
    const double k = omega / std::sqrt(base.p());
    // F(s) = (B p^2 s + A p) / ((ps)^2 + k^2): a cos-shape and a sin-shape.
    TransformExpr F(base, TransformKind::FirstKind);
    auto shape = [&](bool s_num) {
        QuadraticTerm t;
        t.s_numerator = s_num;
        t.p_exp = s_num ? 2 : 1;
        t.base_p = 1;
        t.a = k;
        return t;
    };
    if (B != 0.0) F.add(B, shape(true));
    if (A != 0.0) F.add(A * std::sqrt(base.p()) / omega, shape(false));
    return invert_by_table(F);
}

FunctionExpr solve(const PQCauchyProblem& problem, const PQBase& base) {
    problem.validate();
    if (problem.order == 1) return solve_first_order(problem, base);
    if (!is_zero_function(problem.forcing)) throw UnsupportedError("the oscillator takes no forcing");
    if (!(problem.coefficient > 0.0)) {
        throw UnsupportedError("order-2 problems need coefficient omega^2 > 0");
    }
    return solve_oscillator(std::sqrt(problem.coefficient), problem.initial_derivative, problem.initial_value,
                            base);
}

namespace {

// Largest |a| over small-family atoms (finite series radius).
double small_family_rate(const FunctionExpr& f) {
    double rate = 0.0;
    for (const auto& e : f.terms()) {
        std::visit(
            [&](const auto& g) {
                using G = std::decay_t<decltype(g)>;
                if constexpr (std::is_same_v<G, fn::ExpSmall> || std::is_same_v<G, fn::Cos> ||
                              std::is_same_v<G, fn::Sin> || std::is_same_v<G, fn::Cosh> ||
                              std::is_same_v<G, fn::Sinh> || std::is_same_v<G, fn::MonomialTimesExpSmall>) {
                    rate = std::max(rate, std::abs(g.a));
                }
            },
            e.atom);
    }
    return rate;
}

}  // namespace

ResidualReport verify_solution(const PQCauchyProblem& problem, const FunctionExpr& candidate,
                               const PQBase& base, const std::vector<double>& points, double tol) {
    problem.validate();
    base.require_full_grid("verify_solution");
    const double p = base.p();
    const double radius = small_series_radius(base);
    const double rate = small_family_rate(candidate) + small_family_rate(problem.forcing);
    const double reach = std::pow(p, problem.order);
    for (double t : points) {
        if (!(t > 0.0) || !std::isfinite(t)) {
            throw DomainError(fmt::format("verify_solution: point {} is not positive", t));
        }
        if (rate * reach * t >= radius) {
            throw DomainError(fmt::format(
                "verify_solution: point {} reaches argument {} outside the series radius {}", t,
                rate * reach * t, radius));
        }
    }

    auto f = [&](double x) { return evaluate(candidate, base, x); };
    auto df = [&](double x) { return pq_derivative(f, base, x); };
    const double scale = std::pow(p, problem.dilation_exponent);

    ResidualReport report;
    report.sample_points = points;
    for (double t : points) {
        const double lhs = problem.order == 1 ? df(t) : pq_derivative(df, base, t);
        const double r = lhs + problem.coefficient * f(scale * t) - evaluate(problem.forcing, base, t);
        report.per_point.push_back(std::abs(r));
        report.max_abs_residual = std::max(report.max_abs_residual, std::abs(r));
    }
    report.initial_value_error = std::abs(series_coefficient(candidate, base, 0) - problem.initial_value);
    if (problem.order == 2) {
        report.initial_derivative_error =
            std::abs(initial_derivative(candidate, base, 1) - problem.initial_derivative);
    }
    report.passed = report.max_abs_residual < tol && report.initial_value_error <= tol &&
                    report.initial_derivative_error <= tol;
    return report;
}

}  // namespace pqcalc
