#pragma once

#include <functional>

#include "pqcalc/base.hpp"
#include "pqcalc/summation.hpp"

namespace pqcalc {

using ScalarFunction = std::function<double(double)>;
/// Integrand returned as sign and log-magnitude, for products whose factors
/// overflow double on their own.
using LogScalarFunction = std::function<LogValue(double)>;

/// Summation window and stopping rule for the geometric grids.
///
/// The improper grid is {anchor * q^j / p^{j+1} : j_min <= j <= j_max}; the
/// finite integral uses k = 0..j_max. A direction stops once
/// `consecutive_small` consecutive terms satisfy |term| <= abs_tol * |sum|
/// (or are exactly zero).
struct GridConfig {
    int j_min = -400;
    int j_max = 400;
    double abs_tol = 1e-14;
    int consecutive_small = 20;
    /// Scale c of the improper grid; 1 reproduces the standard grid.
    double anchor = 1.0;

    void validate() const;
};

struct QuadratureResult {
    double value = 0.0;
    int terms_used = 0;
    /// Geometric extrapolation of the neglected tail(s).
    double tail_estimate = 0.0;
};

/// (f(px) - f(qx)) / ((p - q) x). At x = 0 returns a five-point central
/// difference estimate of f'(0) with step eps^{1/5}.
double pq_derivative(const ScalarFunction& f, const PQBase& base, double x);

/// n-fold D_{p,q} at x != 0 through the exact stencil on {p^{n-k} q^k x}.
double pq_derivative_iterated(const ScalarFunction& f, const PQBase& base, int n, double x);

/// Closed form of D^n [1/(a x + b)]:
/// (-a)^n [n]! / prod_{k=0}^{n} (a p^{n-k} q^k x + b).
/// Throws SingularityError (index = k) when a factor vanishes.
double deriv_reciprocal_closed(const PQBase& base, double a, double b, int n, double x);

/// int_0^a f d_{p,q}x = (p - q) a sum_{k>=0} q^k/p^{k+1} f(a q^k/p^{k+1}).
QuadratureResult pq_integral_finite(const ScalarFunction& f, const PQBase& base, double a,
                                    const GridConfig& grid = {});

/// int_a^b = int_0^b - int_0^a, 0 <= a <= b.
QuadratureResult pq_integral_interval(const ScalarFunction& f, const PQBase& base, double a,
                                      double b, const GridConfig& grid = {});

/// Improper integral over the two-sided grid. Throws TruncationError naming
/// the tail ("left tail" = large t, "right tail" = t -> 0) that is still
/// significant at the window edge.
QuadratureResult pq_integral_improper(const ScalarFunction& f, const PQBase& base,
                                      const GridConfig& grid = {});

/// Same as pq_integral_improper with the integrand given in log form.
QuadratureResult pq_integral_improper_log(const LogScalarFunction& f, const PQBase& base,
                                          const GridConfig& grid = {});

}  // namespace pqcalc
