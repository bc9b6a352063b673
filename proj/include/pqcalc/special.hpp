#pragma once

#include <complex>
#include <string_view>
#include <utility>
#include <vector>

#include "pqcalc/base.hpp"
#include "pqcalc/calculus.hpp"
#include "pqcalc/summation.hpp"

namespace pqcalc {

using Complex = std::complex<double>;

/// Parameter pairs (a_p, a_q) of rPhi_s; each generates (a_p (-) a_q)^n.
struct HypergeomSpec {
    std::vector<std::pair<double, double>> numerator;
    std::vector<std::pair<double, double>> denominator;
};

enum class EvalPath { Series, Product, Grid };

std::string_view to_string(EvalPath path);

/// A value together with how it was obtained.
template <typename T>
struct Evaluation {
    T value{};
    int terms_used = 0;
    double tail_estimate = 0.0;
    EvalPath path = EvalPath::Series;
};

/// rPhi_s(z): sum of prod(a_p (-) a_q)^n / (prod(b_p (-) b_q)^n (p (-) q)^n)
///            * [(-1)^n (q/p)^{C(n,2)}]^{1+s-r} z^n.
/// Throws DivergenceError when the terms keep growing.
double hypergeom_phi(const HypergeomSpec& spec, const PQBase& base, double z,
                     const SeriesTruncation& trunc = {});
Evaluation<double> hypergeom_phi_eval(const HypergeomSpec& spec, const PQBase& base, double z,
                                      const SeriesTruncation& trunc = {});

/// Right-hand side of the (p,q)-binomial theorem,
/// (p (-) bz)^inf / (p (-) az)^inf = (bz/p; r)_inf / (az/p; r)_inf.
double binomial_product(const PQBase& base, double a, double b, double z,
                        const SeriesTruncation& trunc = {});

/// Radius p/(p-q) of the small-exponential series (infinite when |q/p| > 1).
double small_series_radius(const PQBase& base);

/// e_{p,q}(z) = sum p^{C(n,2)} z^n / [n]!.
///
/// Series inside 0.75 of the radius, otherwise 1/(r; (1-r) z)_inf. Real
/// arguments on a pole of the continuation throw PoleError.
double exp_small(const PQBase& base, double z, const SeriesTruncation& trunc = {});
Complex exp_small(const PQBase& base, Complex z, const SeriesTruncation& trunc = {});
Evaluation<double> exp_small_eval(const PQBase& base, double z, const SeriesTruncation& trunc = {});

/// E_{p,q}(z) = sum q^{C(n,2)} z^n / [n]!, entire for |q/p| < 1.
/// Series for |z| <= 1, product (r; -(1-r) z)_inf beyond.
double exp_big(const PQBase& base, double z, const SeriesTruncation& trunc = {});
Complex exp_big(const PQBase& base, Complex z, const SeriesTruncation& trunc = {});
Evaluation<double> exp_big_eval(const PQBase& base, double z, const SeriesTruncation& trunc = {});

/// Both exponentials by their power series only (no path switching).
Evaluation<double> exp_small_series(const PQBase& base, double z, const SeriesTruncation& trunc = {});
Evaluation<double> exp_big_series(const PQBase& base, double z, const SeriesTruncation& trunc = {});
/// Both exponentials by their product forms only; require |q/p| < 1.
double exp_small_product(const PQBase& base, double z, const SeriesTruncation& trunc = {});
double exp_big_product(const PQBase& base, double z, const SeriesTruncation& trunc = {});

enum class TrigKind { CosSmall, SinSmall, CosBig, SinBig, CoshSmall, SinhSmall, CoshBig, SinhBig };

std::string_view to_string(TrigKind kind);
bool is_small_family(TrigKind kind);

/// cos/sin = Re/Im e(iz), Cos/Sin = Re/Im E(iz), cosh/sinh = (e(z) +- e(-z))/2,
/// Cosh/Sinh = (E(z) +- E(-z))/2, each through its own series near 0.
/// Small family: |z| must stay inside the series radius (DomainError).
double trig_eval(TrigKind kind, const PQBase& base, double z, const SeriesTruncation& trunc = {});
Evaluation<double> trig_eval_full(TrigKind kind, const PQBase& base, double z,
                                  const SeriesTruncation& trunc = {});

/// Hyperbolic members through the exponential combinations (cross-check path).
double hyperbolic_via_exp(TrigKind kind, const PQBase& base, double z,
                          const SeriesTruncation& trunc = {});

/// Coefficient of z^n in the trig/hyperbolic series (0 for the wrong parity).
double trig_series_coefficient(TrigKind kind, const PQBase& base, int n);

/// Sign/log-magnitude evaluators for the entire (big) family, usable far
/// beyond the double range of the plain values. Require |q/p| < 1.
LogValue exp_big_log(const PQBase& base, double z, const SeriesTruncation& trunc = {});
LogValue trig_big_log(TrigKind kind, const PQBase& base, double z,
                      const SeriesTruncation& trunc = {});
/// e_{p,q}(z) in log form through the product 1/(r; (1-r) z)_inf; PoleError on a pole.
LogValue exp_small_log(const PQBase& base, double z, const SeriesTruncation& trunc = {});

/// Gamma_{p,q}(z) = p^{z(z-1)/2} int_0^inf t^{z-1} E_{p,q}(-qt) d_{p,q}t.
/// Integer z: [z-1]! exactly; otherwise the integral route.
double gamma_first(const PQBase& base, double z, const GridConfig& grid = {},
                   const SeriesTruncation& trunc = {});
/// Integral route for any z > 0 (the grid is anchored at the zeros of E(-qt)).
double gamma_first_integral(const PQBase& base, double z, const GridConfig& grid = {},
                            const SeriesTruncation& trunc = {});
/// Integral with the older prefactor p^{(z-1)(z-2)/2}; kept for regression tests.
double gamma_first_uncorrected(const PQBase& base, double z, const GridConfig& grid = {},
                               const SeriesTruncation& trunc = {});
/// gamma_{p,q}(z) = q^{z(z-1)/2} int_0^inf t^{z-1} e_{p,q}(-pt) d_{p,q}t.
double gamma_second(const PQBase& base, double z, const GridConfig& grid = {},
                    const SeriesTruncation& trunc = {});

}  // namespace pqcalc
