#pragma once

#include <functional>
#include <vector>

#include "pqcalc/base.hpp"
#include "pqcalc/calculus.hpp"
#include "pqcalc/function_expr.hpp"
#include "pqcalc/transform_expr.hpp"

namespace pqcalc {

using TransformFunction = std::function<double(double)>;

/// int_0^inf f(t) K(t, s) d_{p,q}t with K = E_{p,q}(-qst) or e_{p,q}(-pst).
///
/// First kind: E(-qst) vanishes on every point of the grid anchored at
/// p/((p-q)s) beyond that point, so the sum runs over the finite support
/// [0, p/((p-q)s)]. Second kind: the two-sided improper grid; a tail that is
/// still significant at the window edge raises TruncationError.
QuadratureResult transform_numeric(const ScalarFunction& f, const PQBase& base, double s,
                                   TransformKind kind, const GridConfig& grid = {});
/// Same, with the integrand fused in log form for the second kind so that
/// the big family does not overflow before the kernel damps it.
QuadratureResult transform_numeric(const FunctionExpr& f, const PQBase& base, double s,
                                   TransformKind kind, const GridConfig& grid = {});

/// Smallest s for which the closed form of `atom` is asserted.
double validity_threshold(const Atom& atom, const PQBase& base, TransformKind kind);

/// Closed-form transform; linear over sums. UnsupportedError for pairs
/// without a table entry.
TransformExpr transform_table(const FunctionExpr& f, const PQBase& base, TransformKind kind);

/// (1/a) F(s/a), a > 0.
TransformExpr scaling_apply(const TransformExpr& F, double a);
TransformFunction scaling_apply(TransformFunction F, double a);

/// Value of L{t^n f}(s) from F = L{f}:
/// first kind (-1)^n q^{C(n,2)} d^n_s[F(q^{-n}s)], second kind with p.
double derivative_of_transform(const TransformFunction& F, const PQBase& base, int n, double s,
                               TransformKind kind);
TransformExpr derivative_of_transform(const TransformExpr& F, int n);

/// L{D^n f}(s) = s^n/w^{C(n+1,2)} F(s/w^n) - sum_k s^{n-1-k}/w^{C(n-k,2)} (D^k f)(0),
/// w = p (first kind) or q (second kind). initial_derivs has n entries.
double transform_of_derivative(const TransformFunction& F, const std::vector<double>& initial_derivs,
                               const PQBase& base, int n, double s, TransformKind kind);
TransformExpr transform_of_derivative(const TransformExpr& F,
                                      const std::vector<double>& initial_derivs, int n);

/// Reads a canonical TransformExpr back through the table. Throws
/// NotInvertibleError with the unmatched term.
FunctionExpr invert_by_table(const TransformExpr& F);

/// Canonical form of a FunctionExpr (what invert_by_table returns).
FunctionExpr canonical(const FunctionExpr& f);

}  // namespace pqcalc
