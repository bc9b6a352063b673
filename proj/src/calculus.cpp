#include "pqcalc/calculus.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <fmt/format.h>

#include "pqcalc/arith.hpp"
#include "pqcalc/errors.hpp"

namespace pqcalc {

void GridConfig::validate() const {
    if (!(j_min < 0 && 0 < j_max)) {
        throw DomainError(fmt::format("grid window needs j_min < 0 < j_max (got [{}, {}])", j_min, j_max));
    }
    if (!(abs_tol > 0.0)) throw DomainError("grid abs_tol must be positive");
    if (consecutive_small < 1) throw DomainError("grid consecutive_small must be at least 1");
    if (!(anchor > 0.0) || !std::isfinite(anchor)) throw DomainError("grid anchor must be positive");
}

double pq_derivative(const ScalarFunction& f, const PQBase& base, double x) {
    if (x != 0.0) {
        return (f(base.p() * x) - f(base.q() * x)) / ((base.p() - base.q()) * x);
    }
    const double h = std::pow(std::numeric_limits<double>::epsilon(), 0.2);
    return (f(-2.0 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2.0 * h)) / (12.0 * h);
}

double pq_derivative_iterated(const ScalarFunction& f, const PQBase& base, int n, double x) {
    if (n < 0) throw DomainError(fmt::format("derivative order n = {} is negative", n));
    if (n == 0) return f(x);
    if (x == 0.0) {
        if (n == 1) return pq_derivative(f, base, x);
        throw DomainError("iterated (p,q)-derivative of order >= 2 needs x != 0");
    }
    using L = long double;
    const L p = base.p();
    const L q = base.q();
    // coeffs[k] multiplies f(p^{m-k} q^k x) / x^m after m steps.
    std::vector<L> coeffs{1.0L};
    for (int m = 0; m < n; ++m) {
        const L pm = std::pow(p, static_cast<L>(-m));
        const L qm = std::pow(q, static_cast<L>(-m));
        std::vector<L> next(coeffs.size() + 1, 0.0L);
        for (std::size_t k = 0; k < next.size(); ++k) {
            L c = 0.0L;
            if (k < coeffs.size()) c += coeffs[k] * pm;
            if (k > 0) c -= coeffs[k - 1] * qm;
            next[k] = c / (p - q);
        }
        coeffs = std::move(next);
    }
    L acc = 0.0L;
    for (int k = 0; k <= n; ++k) {
        const L point = std::pow(p, static_cast<L>(n - k)) * std::pow(q, static_cast<L>(k)) * x;
        acc += coeffs[k] * static_cast<L>(f(static_cast<double>(point)));
    }
    return static_cast<double>(acc / std::pow(static_cast<L>(x), static_cast<L>(n)));
}

double deriv_reciprocal_closed(const PQBase& base, double a, double b, int n, double x) {
    if (n < 0) throw DomainError(fmt::format("derivative order n = {} is negative", n));
    double denom = 1.0;
    for (int k = 0; k <= n; ++k) {
        const double factor = a * std::pow(base.p(), n - k) * std::pow(base.q(), k) * x + b;
        if (factor == 0.0) {
            throw SingularityError(
                fmt::format("D^{}[1/(ax+b)]: denominator factor k = {} vanishes", n, k), k);
        }
        denom *= factor;
    }
    return std::pow(-a, n) * pq_factorial(base, n) / denom;
}

namespace {

// One direction of a geometric-grid sum.
struct DirectionalSum {
    CompensatedSum<double> sum;
    int terms = 0;
    double last = 0.0;
    double prev = 0.0;
    bool converged = false;

    double tail_estimate() const {
        if (last == 0.0) return 0.0;
        if (prev != 0.0) {
            const double rho = last / prev;
            if (rho < 1.0) return last * rho / (1.0 - rho);
        }
        return last;
    }
};

// Adds term(index) for index = start, start + step, ... until `limit` (inclusive)
// or until the stopping rule fires. `offset` is the magnitude already summed
// in other directions, used for the relative stopping test.
template <typename TermFn>
void run_direction(DirectionalSum& dir, TermFn&& term, int start, int step, int limit,
                   const GridConfig& grid, double offset, const char* where) {
    int small = 0;
    for (int idx = start; step > 0 ? idx <= limit : idx >= limit; idx += step) {
        const double t = term(idx);
        ++dir.terms;
        if (!std::isfinite(t)) {
            throw DivergenceError(fmt::format("(p,q)-integral: non-finite term in the {} at index {}",
                                              where, idx),
                                  dir.sum.value() + offset, dir.terms, t, where);
        }
        dir.sum.add(t);
        const double mag = std::abs(t);
        if (mag != 0.0) {
            dir.prev = dir.last;
            dir.last = mag;
        }
        const double scale = std::abs(dir.sum.value() + offset);
        if (mag == 0.0 || mag <= grid.abs_tol * scale) {
            if (++small >= grid.consecutive_small) {
                dir.converged = true;
                return;
            }
        } else {
            small = 0;
        }
    }
}

[[noreturn]] void throw_truncation(const DirectionalSum& dir, double partial, const char* where,
                                   int edge) {
    throw TruncationError(
        fmt::format("(p,q)-integral: {} still significant at window edge j = {} (last term {:.3e})",
                    where, edge, dir.last),
        partial, dir.terms, dir.last, where);
}

}  // namespace

QuadratureResult pq_integral_finite(const ScalarFunction& f, const PQBase& base, double a,
                                    const GridConfig& grid) {
    base.require_full_grid("pq_integral_finite");
    grid.validate();
    if (a < 0.0) throw DomainError(fmt::format("pq_integral_finite: upper limit {} < 0", a));
    if (a == 0.0) return {};
    const double p = base.p();
    const double r = base.ratio();
    const double weight0 = (p - base.q()) * a / p;
    auto term = [&](int k) {
        const double w = weight0 * std::pow(r, k);
        return w * f(a * std::pow(r, k) / p);
    };
    DirectionalSum dir;
    run_direction(dir, term, 0, 1, grid.j_max, grid, 0.0, "right tail");
    if (!dir.converged) throw_truncation(dir, dir.sum.value(), "right tail", grid.j_max);
    return {dir.sum.value(), dir.terms, dir.tail_estimate()};
}

QuadratureResult pq_integral_interval(const ScalarFunction& f, const PQBase& base, double a,
                                      double b, const GridConfig& grid) {
    if (!(0.0 <= a && a <= b)) {
        throw DomainError(fmt::format("pq_integral_interval: need 0 <= a <= b (got a = {}, b = {})", a, b));
    }
    if (a == b) {
        base.require_full_grid("pq_integral_interval");
        return {};
    }
    const QuadratureResult upper = pq_integral_finite(f, base, b, grid);
    const QuadratureResult lower = pq_integral_finite(f, base, a, grid);
    return {upper.value - lower.value, upper.terms_used + lower.terms_used,
            upper.tail_estimate + lower.tail_estimate};
}

namespace {

template <typename TermFn>
QuadratureResult improper_sum(TermFn&& term, const GridConfig& grid) {
    DirectionalSum right;
    run_direction(right, term, 0, 1, grid.j_max, grid, 0.0, "right tail");
    if (!right.converged) throw_truncation(right, right.sum.value(), "right tail", grid.j_max);
    DirectionalSum left;
    run_direction(left, term, -1, -1, grid.j_min, grid, right.sum.value(), "left tail");
    if (!left.converged) {
        throw_truncation(left, right.sum.value() + left.sum.value(), "left tail", grid.j_min);
    }
    CompensatedSum<double> total;
    total.add(right.sum.value());
    total.add(left.sum.value());
    return {total.value(), right.terms + left.terms,
            right.tail_estimate() + left.tail_estimate()};
}

}  // namespace

QuadratureResult pq_integral_improper(const ScalarFunction& f, const PQBase& base,
                                      const GridConfig& grid) {
    base.require_full_grid("pq_integral_improper");
    grid.validate();
    const double p = base.p();
    const double r = base.ratio();
    const double c = grid.anchor;
    auto term = [&](int j) {
        const double t = c * std::pow(r, j) / p;
        const double y = f(t);
        if (y == 0.0) return 0.0;
        return (p - base.q()) * t * y;
    };
    return improper_sum(term, grid);
}

QuadratureResult pq_integral_improper_log(const LogScalarFunction& f, const PQBase& base,
                                          const GridConfig& grid) {
    base.require_full_grid("pq_integral_improper");
    grid.validate();
    const double p = base.p();
    const double r = base.ratio();
    const double c = grid.anchor;
    const double log_width = std::log(p - base.q());
    auto term = [&](int j) {
        const double t = c * std::pow(r, j) / p;
        const LogValue y = f(t);
        if (y.sign == 0) return 0.0;
        return y.sign * std::exp(y.log_abs + log_width + std::log(t));
    };
    return improper_sum(term, grid);
}

}  // namespace pqcalc
