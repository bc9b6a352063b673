#pragma once

#include <string>
#include <vector>

#include "pqcalc/base.hpp"
#include "pqcalc/calculus.hpp"
#include "pqcalc/function_expr.hpp"
#include "pqcalc/transform_expr.hpp"

namespace pqcalc {

/// One identity, sampled; deviation is the worst scaled |lhs - rhs|.
struct IdentityCheck {
    std::string name;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    int samples = 0;
    bool passed = false;
};

struct SuiteReport {
    std::string suite;
    std::vector<IdentityCheck> checks;
    double max_deviation = 0.0;
    bool passed = false;
};

/// One (function, s) pair of the numeric-vs-table comparison.
struct OracleCase {
    FunctionExpr f;
    TransformKind kind;
    double s;
    double tolerance;  // relative
};

/// Every table family (n <= 6, a in {0.3, 0.5}, alpha in {0.5, 1.5}) for both
/// kinds, at 1.5x and 2x its validity threshold. First-kind exponential and
/// trig members also keep s >= 2a/p.
std::vector<OracleCase> transform_oracle_cases(const PQBase& base);

/// exp-reciprocal, trig, hyperbolic, gamma-recurrence, product-rules,
/// integration, binomial, transform-oracle.
const std::vector<std::string>& identity_suites();

/// Throws DomainError for an unknown suite. Grid suites need a FullGrid base.
SuiteReport run_identity_suite(const std::string& suite, const PQBase& base,
                               const GridConfig& grid = {});

}  // namespace pqcalc
