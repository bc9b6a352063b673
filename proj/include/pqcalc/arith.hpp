#pragma once

#include <complex>

#include "pqcalc/base.hpp"

namespace pqcalc {

enum class PowerSign { Minus, Plus };

/// Largest n accepted by pq_factorial / pq_binomial.
inline constexpr int kMaxFactorialArgument = 10000;

/// [n]_{p,q} = (p^n - q^n)/(p - q).
double pq_number(const PQBase& base, int n);

/// Real-argument extension [z]_{p,q} = (p^z - q^z)/(p - q), used by the
/// Gamma recurrences at non-integer arguments.
double pq_number_real(const PQBase& base, double z);

/// [n]_{p,q}! = [1][2]...[n], with [0]! = 1.
double pq_factorial(const PQBase& base, int n);

/// (p,q)-binomial coefficient; requires 0 <= k <= n.
double pq_binomial(const PQBase& base, int n, int k);

/// (x (-) a)^n = prod_{k<n} (x p^k - a q^k), or with + for PowerSign::Plus.
double pq_power_finite(const PQBase& base, double x, double a, int n, PowerSign sign);

/// prod_{k>=0} (1 - z r^k) for |r| < 1.
///
/// Stops once |z r^k| has stayed below the tolerance for
/// `consecutive_small` factors. Throws DomainError for |r| >= 1 and
/// TruncationError (with the partial product) if max_terms is exhausted.
double pochhammer_inf(double r, double z, const SeriesTruncation& trunc = {});
std::complex<double> pochhammer_inf(double r, std::complex<double> z,
                                    const SeriesTruncation& trunc = {});

/// K-factor partial product prod_{k<K} (a p^k -/+ b q^k). No convergence claim.
double pq_power_infinite_partial(const PQBase& base, double a, double b, PowerSign sign, int K);

/// n(n-1)/2
constexpr long long choose2(long long n) noexcept { return n * (n - 1) / 2; }

}  // namespace pqcalc
