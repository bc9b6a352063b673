#include "pqcalc/arith.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "pqcalc/errors.hpp"

namespace pqcalc {

PQBase::PQBase(double p, double q) : p_(p), q_(q), regime_(Regime::SeriesOnly) {
    if (!std::isfinite(p) || !std::isfinite(q)) {
        throw DomainError("p and q must be finite");
    }
    if (p == 0.0 || q == 0.0) {
        throw DomainError("p and q must be nonzero");
    }
    if (p == q) {
        throw DomainError(fmt::format("p and q must differ (p = q = {})", p));
    }
    if (0.0 < q && q < p && p >= 1.0) {
        regime_ = Regime::FullGrid;
    }
}

void PQBase::require_full_grid(std::string_view operation) const {
    if (regime_ != Regime::FullGrid) {
        throw DomainError(fmt::format(
            "{} requires 0 < q < p and p >= 1 (got p = {}, q = {})", operation, p_, q_));
    }
}

void SeriesTruncation::validate() const {
    if (max_terms < 1) throw DomainError("max_terms must be at least 1");
    if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0)) throw DomainError("tolerances must be >= 0");
    if (abs_tol == 0.0 && rel_tol == 0.0) {
        throw DomainError("at least one of abs_tol, rel_tol must be positive");
    }
    if (consecutive_small < 1) throw DomainError("consecutive_small must be at least 1");
}

double pq_number(const PQBase& base, int n) {
    if (n < 0) throw DomainError(fmt::format("pq_number: n = {} is negative", n));
    // Horner form of p^{n-1} + p^{n-2} q + ... + q^{n-1}, i.e. the recurrence
    // [k+1] = p^k + q [k]; avoids the cancellation in (p^n - q^n)/(p - q).
    double acc = 0.0;
    double pk = 1.0;
    for (int k = 0; k < n; ++k) {
        acc = pk + base.q() * acc;
        pk *= base.p();
    }
    return acc;
}

double pq_number_real(const PQBase& base, double z) {
    return (std::pow(base.p(), z) - std::pow(base.q(), z)) / (base.p() - base.q());
}

namespace {

void check_factorial_range(int n, const char* op) {
    if (n < 0) throw DomainError(fmt::format("{}: n = {} is negative", op, n));
    if (n > kMaxFactorialArgument) {
        throw RangeError(fmt::format("{}: n = {} exceeds the cap {}", op, n, kMaxFactorialArgument));
    }
}

}  // namespace

double pq_factorial(const PQBase& base, int n) {
    check_factorial_range(n, "pq_factorial");
    double acc = 1.0;
    for (int k = 1; k <= n; ++k) {
        acc *= pq_number(base, k);
    }
    if (!std::isfinite(acc)) {
        throw RangeError(fmt::format("pq_factorial: [{}]! overflows double", n));
    }
    return acc;
}

double pq_binomial(const PQBase& base, int n, int k) {
    check_factorial_range(n, "pq_binomial");
    if (k < 0 || k > n) {
        throw DomainError(fmt::format("pq_binomial: k = {} outside [0, {}]", k, n));
    }
    // Symmetry lets us use the shorter product.
    const int m = std::min(k, n - k);
    double acc = 1.0;
    for (int i = 1; i <= m; ++i) {
        acc *= pq_number(base, n - m + i) / pq_number(base, i);
    }
    if (!std::isfinite(acc)) {
        throw RangeError(fmt::format("pq_binomial: ({} choose {}) overflows double", n, k));
    }
    return acc;
}

double pq_power_finite(const PQBase& base, double x, double a, int n, PowerSign sign) {
    if (n < 0) throw DomainError(fmt::format("pq_power_finite: n = {} is negative", n));
    const double s = sign == PowerSign::Minus ? -1.0 : 1.0;
    double acc = 1.0;
    double pk = 1.0;
    double qk = 1.0;
    for (int k = 0; k < n; ++k) {
        acc *= x * pk + s * a * qk;
        pk *= base.p();
        qk *= base.q();
    }
    return acc;
}

namespace {

template <typename T>
T pochhammer_impl(double r, T z, const SeriesTruncation& trunc) {
    trunc.validate();
    if (!(std::abs(r) < 1.0)) {
        throw DomainError(fmt::format("pochhammer_inf: |r| = {} must be < 1", std::abs(r)));
    }
    T acc = 1.0;
    T term = z;  // z r^k
    int small = 0;
    for (int k = 0; k < trunc.max_terms; ++k) {
        acc *= T(1.0) - term;
        const double mag = std::abs(term);
        if (mag <= trunc.abs_tol || mag <= trunc.rel_tol || acc == T(0.0)) {
            if (++small >= trunc.consecutive_small || acc == T(0.0)) return acc;
        } else {
            small = 0;
        }
        term *= r;
    }
    throw TruncationError(
        fmt::format("pochhammer_inf: no convergence within {} factors", trunc.max_terms),
        std::abs(acc), trunc.max_terms, std::abs(term), "product");
}

}  // namespace

double pochhammer_inf(double r, double z, const SeriesTruncation& trunc) {
    return pochhammer_impl<double>(r, z, trunc);
}

std::complex<double> pochhammer_inf(double r, std::complex<double> z,
                                    const SeriesTruncation& trunc) {
    return pochhammer_impl<std::complex<double>>(r, z, trunc);
}

double pq_power_infinite_partial(const PQBase& base, double a, double b, PowerSign sign, int K) {
    if (K < 1) throw DomainError(fmt::format("pq_power_infinite_partial: K = {} < 1", K));
    return pq_power_finite(base, a, b, K, sign);
}

}  // namespace pqcalc
