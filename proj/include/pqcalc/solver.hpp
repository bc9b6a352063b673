#pragma once

#include <vector>

#include "pqcalc/base.hpp"
#include "pqcalc/function_expr.hpp"
#include "pqcalc/transform_expr.hpp"

namespace pqcalc {

/// D^order f(t) + coefficient f(p^m t) = forcing(t), m = dilation_exponent,
/// with f(0) = initial_value and, for order 2, (Df)(0) = initial_derivative.
struct PQCauchyProblem {
    int order = 1;
    int dilation_exponent = 1;
    double coefficient = 0.0;
    FunctionExpr forcing = fn::Const{0.0};
    double initial_value = 1.0;
    double initial_derivative = 0.0;

    /// Throws DomainError unless dilation_exponent == order and order is 1 or 2.
    void validate() const;
};

/// D f + c f(pt) = 0, f(0) = f0.
PQCauchyProblem first_order_problem(double c, double f0 = 1.0);
/// D h - lambda h(pt) = e(lambda q t), h(0) = h0.
PQCauchyProblem resonant_problem(double lambda, const PQBase& base, double h0 = 0.0);
/// D^2 f + omega^2 f(p^2 t) = 0, (Df)(0) = A, f(0) = B.
PQCauchyProblem oscillator_problem(double omega, double A, double B);

struct ResidualReport {
    double max_abs_residual = 0.0;
    std::vector<double> sample_points;
    std::vector<double> per_point;
    /// |series constant term - f(0)| and, for order 2, |linear term - (Df)(0)|.
    double initial_value_error = 0.0;
    double initial_derivative_error = 0.0;
    bool passed = false;
};

/// Transform-domain solution before inversion, and its inverse.
struct FirstOrderSolution {
    TransformExpr transform;
    FunctionExpr solution;
};

/// First-kind transform of the equation, solved for L{f}:
/// L{f}(s) = p (f0 + L{g}(ps)) / (ps + c), then inverted by table.
/// Forcing must be zero or the resonant e(-c q t); UnsupportedError otherwise.
FirstOrderSolution solve_first_order_detailed(const PQCauchyProblem& problem, const PQBase& base);
FunctionExpr solve_first_order(const PQCauchyProblem& problem, const PQBase& base);

/// B cos(k t) + A/k sin(k t), k = omega/sqrt(p). DomainError for omega <= 0.
FunctionExpr solve_oscillator(double omega, double A, double B, const PQBase& base);

/// Dispatches on order.
FunctionExpr solve(const PQCauchyProblem& problem, const PQBase& base);

/// Residual of the equation at each point, with two-point stencils.
/// Points must be positive and keep every small-family argument reached by
/// the stencil inside p/(p-q); DomainError names the first offender.
ResidualReport verify_solution(const PQCauchyProblem& problem, const FunctionExpr& candidate,
                               const PQBase& base, const std::vector<double>& points,
                               double tol = 1e-8);

}  // namespace pqcalc
