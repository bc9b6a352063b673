#include "pqcalc/special.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "pqcalc/arith.hpp"
#include "pqcalc/errors.hpp"

namespace pqcalc {

std::string_view to_string(EvalPath path) {
    switch (path) {
        case EvalPath::Series: return "series";
        case EvalPath::Product: return "product";
        case EvalPath::Grid: return "grid";
    }
    return "?";
}

std::string_view to_string(TrigKind kind) {
    switch (kind) {
        case TrigKind::CosSmall: return "cos";
        case TrigKind::SinSmall: return "sin";
        case TrigKind::CosBig: return "Cos";
        case TrigKind::SinBig: return "Sin";
        case TrigKind::CoshSmall: return "cosh";
        case TrigKind::SinhSmall: return "sinh";
        case TrigKind::CoshBig: return "Cosh";
        case TrigKind::SinhBig: return "Sinh";
    }
    return "?";
}

bool is_small_family(TrigKind kind) {
    return kind == TrigKind::CosSmall || kind == TrigKind::SinSmall ||
           kind == TrigKind::CoshSmall || kind == TrigKind::SinhSmall;
}

namespace {

constexpr int kGrowthStreak = 64;

// Sums term_0 = 1, term_{n+1} = term_n * ratio(n). `ratio` may throw.
template <typename T, typename RatioFn>
Evaluation<T> power_series(RatioFn&& ratio, const SeriesTruncation& trunc, const char* what) {
    trunc.validate();
    CompensatedSum<T> sum;
    T term = T(1.0);
    int small = 0;
    int growing = 0;
    double prev_mag = 1.0;
    for (int n = 0; n < trunc.max_terms; ++n) {
        sum.add(term);
        const double mag = std::abs(term);
        if (!std::isfinite(mag)) {
            throw DivergenceError(fmt::format("{}: series term overflowed at n = {}", what, n),
                                  std::abs(sum.value()), n + 1, mag, "series");
        }
        const double scale = std::abs(sum.value());
        if (mag == 0.0) {
            // Every later term is a multiple of this one.
            return {sum.value(), n + 1, 0.0, EvalPath::Series};
        }
        if (mag <= trunc.abs_tol || mag <= trunc.rel_tol * scale) {
            if (++small >= trunc.consecutive_small) {
                return {sum.value(), n + 1, mag, EvalPath::Series};
            }
        } else {
            small = 0;
        }
        if (n > 0 && mag > prev_mag && mag > scale) {
            if (++growing >= kGrowthStreak) {
                throw DivergenceError(
                    fmt::format("{}: series terms keep growing (n = {}, |term| = {:.3e})", what, n, mag),
                    scale, n + 1, mag, "series");
            }
        } else {
            growing = 0;
        }
        prev_mag = mag;
        term *= ratio(n);
    }
    throw TruncationError(fmt::format("{}: series did not converge within {} terms", what,
                                      trunc.max_terms),
                          std::abs(sum.value()), trunc.max_terms, std::abs(term), "series");
}

// (z; r)_inf with term count, as in pochhammer_inf.
template <typename T>
Evaluation<T> product_eval(double r, T z, const SeriesTruncation& trunc) {
    trunc.validate();
    T acc = T(1.0);
    T x = z;
    int small = 0;
    for (int k = 0; k < trunc.max_terms; ++k) {
        acc *= T(1.0) - x;
        const double mag = std::abs(x);
        if (acc == T(0.0)) return {acc, k + 1, 0.0, EvalPath::Product};
        if (mag <= trunc.abs_tol || mag <= trunc.rel_tol) {
            if (++small >= trunc.consecutive_small) return {acc, k + 1, mag, EvalPath::Product};
        } else {
            small = 0;
        }
        x *= r;
    }
    throw TruncationError(
        fmt::format("infinite product did not converge within {} factors", trunc.max_terms),
        std::abs(acc), trunc.max_terms, std::abs(x), "product");
}

void check_poles(double r, double w, double z) {
    // Factors 1 - w r^k with |w r^k| < 1/2 cannot vanish.
    double x = w;
    for (int k = 0; std::abs(x) >= 0.5; ++k) {
        if (std::abs(1.0 - x) <= 64 * std::numeric_limits<double>::epsilon()) {
            throw PoleError(fmt::format("e_{{p,q}}({}) sits on a pole of the product (factor k = {})", z, k), k);
        }
        x *= r;
    }
}

template <typename T>
Evaluation<T> exp_small_series_t(const PQBase& base, T z, const SeriesTruncation& trunc) {
    const double p = base.p();
    const double q = base.q();
    double pk = 1.0;   // p^n
    double num = 0.0;  // [n]
    return power_series<T>(
        [&](int) {
            num = pk + q * num;  // [n+1]
            if (num == 0.0) throw DomainError("e_{p,q} series: [n] vanishes for this base");
            const T factor = T(pk) * z / num;
            pk *= p;
            return factor;
        },
        trunc, "e_{p,q}");
}

template <typename T>
Evaluation<T> exp_big_series_t(const PQBase& base, T z, const SeriesTruncation& trunc) {
    const double p = base.p();
    const double q = base.q();
    double pk = 1.0;
    double qk = 1.0;
    double num = 0.0;
    return power_series<T>(
        [&](int) {
            num = pk + q * num;
            if (num == 0.0) throw DomainError("E_{p,q} series: [n] vanishes for this base");
            const T factor = T(qk) * z / num;
            pk *= p;
            qk *= q;
            return factor;
        },
        trunc, "E_{p,q}");
}

template <typename T>
Evaluation<T> exp_big_t(const PQBase& base, T z, const SeriesTruncation& trunc);

template <typename T>
Evaluation<T> exp_small_t(const PQBase& base, T z, const SeriesTruncation& trunc) {
    const double r = base.ratio();
    if (std::abs(r) > 1.0) return exp_big_t<T>(base.swapped(), z, trunc);
    if (std::abs(r) == 1.0 || std::abs(z) < 0.75 * small_series_radius(base)) {
        return exp_small_series_t<T>(base, z, trunc);
    }
    const T w = (1.0 - r) * z;
    if constexpr (std::is_floating_point_v<T>) check_poles(r, w, z);
    Evaluation<T> prod = product_eval<T>(r, w, trunc);
    if (prod.value == T(0.0)) throw PoleError("e_{p,q}: argument on a pole of the product", 0);
    prod.value = T(1.0) / prod.value;
    return prod;
}

template <typename T>
Evaluation<T> exp_big_t(const PQBase& base, T z, const SeriesTruncation& trunc) {
    const double r = base.ratio();
    if (std::abs(r) > 1.0) return exp_small_t<T>(base.swapped(), z, trunc);
    if (std::abs(r) == 1.0 || std::abs(z) <= 1.0) return exp_big_series_t<T>(base, z, trunc);
    return product_eval<T>(r, -(1.0 - r) * z, trunc);
}

void require_contracting(const PQBase& base, const char* op) {
    if (!(std::abs(base.ratio()) < 1.0)) {
        throw DomainError(fmt::format("{} needs |q/p| < 1 (got q/p = {})", op, base.ratio()));
    }
}

}  // namespace

double small_series_radius(const PQBase& base) {
    const double r = base.ratio();
    if (std::abs(r) >= 1.0) return std::numeric_limits<double>::infinity();
    return 1.0 / (1.0 - r);
}

Evaluation<double> hypergeom_phi_eval(const HypergeomSpec& spec, const PQBase& base, double z,
                                      const SeriesTruncation& trunc) {
    const double p = base.p();
    const double q = base.q();
    const int e = 1 + static_cast<int>(spec.denominator.size()) - static_cast<int>(spec.numerator.size());
    const double r = base.ratio();
    double pk = 1.0;
    double qk = 1.0;
    return power_series<double>(
        [&](int n) {
            double factor = z;
            for (const auto& [ap, aq] : spec.numerator) factor *= ap * pk - aq * qk;
            double den = p * pk - q * qk;
            for (const auto& [bp, bq] : spec.denominator) den *= bp * pk - bq * qk;
            if (den == 0.0) {
                throw SingularityError(
                    fmt::format("hypergeometric series: denominator factor vanishes at n = {}", n), n);
            }
            factor /= den;
            if (e != 0) {
                factor *= (e % 2 == 0 ? 1.0 : -1.0) * std::pow(r, static_cast<double>(n) * e);
            }
            pk *= p;
            qk *= q;
            return factor;
        },
        trunc, "rPhi_s");
}

double hypergeom_phi(const HypergeomSpec& spec, const PQBase& base, double z,
                     const SeriesTruncation& trunc) {
    return hypergeom_phi_eval(spec, base, z, trunc).value;
}

double binomial_product(const PQBase& base, double a, double b, double z,
                        const SeriesTruncation& trunc) {
    require_contracting(base, "binomial_product");
    const double r = base.ratio();
    const double den = pochhammer_inf(r, a * z / base.p(), trunc);
    if (den == 0.0) throw PoleError("binomial_product: denominator product vanishes", 0);
    return pochhammer_inf(r, b * z / base.p(), trunc) / den;
}

Evaluation<double> exp_small_eval(const PQBase& base, double z, const SeriesTruncation& trunc) {
    return exp_small_t<double>(base, z, trunc);
}
double exp_small(const PQBase& base, double z, const SeriesTruncation& trunc) {
    return exp_small_t<double>(base, z, trunc).value;
}
Complex exp_small(const PQBase& base, Complex z, const SeriesTruncation& trunc) {
    return exp_small_t<Complex>(base, z, trunc).value;
}

Evaluation<double> exp_big_eval(const PQBase& base, double z, const SeriesTruncation& trunc) {
    return exp_big_t<double>(base, z, trunc);
}
double exp_big(const PQBase& base, double z, const SeriesTruncation& trunc) {
    return exp_big_t<double>(base, z, trunc).value;
}
Complex exp_big(const PQBase& base, Complex z, const SeriesTruncation& trunc) {
    return exp_big_t<Complex>(base, z, trunc).value;
}

Evaluation<double> exp_small_series(const PQBase& base, double z, const SeriesTruncation& trunc) {
    return exp_small_series_t<double>(base, z, trunc);
}
Evaluation<double> exp_big_series(const PQBase& base, double z, const SeriesTruncation& trunc) {
    return exp_big_series_t<double>(base, z, trunc);
}

double exp_small_product(const PQBase& base, double z, const SeriesTruncation& trunc) {
    require_contracting(base, "exp_small_product");
    const double r = base.ratio();
    check_poles(r, (1.0 - r) * z, z);
    return 1.0 / pochhammer_inf(r, (1.0 - r) * z, trunc);
}

double exp_big_product(const PQBase& base, double z, const SeriesTruncation& trunc) {
    require_contracting(base, "exp_big_product");
    const double r = base.ratio();
    return pochhammer_inf(r, -(1.0 - r) * z, trunc);
}

double trig_series_coefficient(TrigKind kind, const PQBase& base, int n) {
    if (n < 0) throw DomainError("series index must be >= 0");
    const bool even = kind == TrigKind::CosSmall || kind == TrigKind::CosBig ||
                      kind == TrigKind::CoshSmall || kind == TrigKind::CoshBig;
    if ((n % 2 == 0) != even) return 0.0;
    const bool alternating = kind == TrigKind::CosSmall || kind == TrigKind::SinSmall ||
                             kind == TrigKind::CosBig || kind == TrigKind::SinBig;
    const double weight = is_small_family(kind) ? base.p() : base.q();
    double c = std::pow(weight, static_cast<double>(choose2(n))) / pq_factorial(base, n);
    if (alternating && (n / 2) % 2 == 1) c = -c;
    return c;
}

namespace {

// Even or odd part of the e/E series, sum_n c_n z^n over one parity.
Evaluation<double> hyperbolic_series(TrigKind kind, const PQBase& base, double z,
                                     const SeriesTruncation& trunc) {
    const bool small = is_small_family(kind);
    const bool even = kind == TrigKind::CoshSmall || kind == TrigKind::CoshBig;
    const double p = base.p();
    const double q = base.q();
    const double w = small ? p : q;
    // Step n -> n+2: c_{n+2}/c_n = w^{2n+1} / ([n+1][n+2]).
    double n_cur = even ? 0 : 1;
    const double start = even ? 1.0 : z;
    Evaluation<double> ev = power_series<double>(
        [&](int) {
            const int n = static_cast<int>(n_cur);
            const double f = std::pow(w, 2.0 * n + 1.0) * z * z /
                             (pq_number(base, n + 1) * pq_number(base, n + 2));
            n_cur += 2;
            return f;
        },
        trunc, to_string(kind).data());
    ev.value *= start;
    ev.tail_estimate *= std::abs(start);
    return ev;
}

}  // namespace

Evaluation<double> trig_eval_full(TrigKind kind, const PQBase& base, double z,
                                  const SeriesTruncation& trunc) {
    if (is_small_family(kind)) {
        const double radius = small_series_radius(base);
        if (!(std::abs(z) < radius)) {
            throw DomainError(fmt::format("{}_{{p,q}}({}) : |z| outside the series radius {}",
                                          to_string(kind), z, radius));
        }
    }
    switch (kind) {
        case TrigKind::CosSmall:
        case TrigKind::SinSmall: {
            const auto ev = exp_small_t<Complex>(base, Complex(0.0, z), trunc);
            const double v = kind == TrigKind::CosSmall ? ev.value.real() : ev.value.imag();
            return {v, ev.terms_used, ev.tail_estimate, ev.path};
        }
        case TrigKind::CosBig:
        case TrigKind::SinBig: {
            const auto ev = exp_big_t<Complex>(base, Complex(0.0, z), trunc);
            const double v = kind == TrigKind::CosBig ? ev.value.real() : ev.value.imag();
            return {v, ev.terms_used, ev.tail_estimate, ev.path};
        }
        case TrigKind::CoshSmall:
        case TrigKind::SinhSmall:
            if (std::abs(z) >= 0.75 * small_series_radius(base)) {
                return {hyperbolic_via_exp(kind, base, z, trunc), 0, 0.0, EvalPath::Product};
            }
            return hyperbolic_series(kind, base, z, trunc);
        case TrigKind::CoshBig:
        case TrigKind::SinhBig:
            return hyperbolic_series(kind, base, z, trunc);
    }
    throw DomainError("unknown trig kind");
}

double trig_eval(TrigKind kind, const PQBase& base, double z, const SeriesTruncation& trunc) {
    return trig_eval_full(kind, base, z, trunc).value;
}

double hyperbolic_via_exp(TrigKind kind, const PQBase& base, double z,
                          const SeriesTruncation& trunc) {
    double plus = 0.0;
    double minus = 0.0;
    switch (kind) {
        case TrigKind::CoshSmall:
        case TrigKind::SinhSmall:
            plus = exp_small(base, z, trunc);
            minus = exp_small(base, -z, trunc);
            break;
        case TrigKind::CoshBig:
        case TrigKind::SinhBig:
            plus = exp_big(base, z, trunc);
            minus = exp_big(base, -z, trunc);
            break;
        default:
            throw DomainError(fmt::format("hyperbolic_via_exp: {} is not hyperbolic", to_string(kind)));
    }
    const bool cosh = kind == TrigKind::CoshSmall || kind == TrigKind::CoshBig;
    return cosh ? 0.5 * (plus + minus) : 0.5 * (plus - minus);
}

namespace {

// Number of factors until (1 - r) |z| r^k is negligible.
template <typename Fn>
void for_each_factor(double r, double x0, const SeriesTruncation& trunc, Fn&& fn) {
    trunc.validate();
    double x = x0;
    int small = 0;
    for (int k = 0; k < trunc.max_terms; ++k) {
        fn(x);
        const double mag = std::abs(x);
        if (mag <= trunc.abs_tol || mag <= trunc.rel_tol || x == 0.0) {
            if (++small >= trunc.consecutive_small || x == 0.0) return;
        } else {
            small = 0;
        }
        x *= r;
    }
    throw TruncationError("log-form product did not converge", 0.0, trunc.max_terms, std::abs(x),
                          "product");
}

}  // namespace

LogValue exp_big_log(const PQBase& base, double z, const SeriesTruncation& trunc) {
    require_contracting(base, "exp_big_log");
    const double r = base.ratio();
    LogValue out{1, 0.0};
    for_each_factor(r, (1.0 - r) * z, trunc, [&](double x) {
        const double f = 1.0 + x;
        if (f == 0.0) {
            out = {};
        } else if (out.sign != 0) {
            if (f < 0) out.sign = -out.sign;
            out.log_abs += std::abs(x) < 0.5 ? std::log1p(x) : std::log(std::abs(f));
        }
    });
    return out;
}

LogValue exp_small_log(const PQBase& base, double z, const SeriesTruncation& trunc) {
    require_contracting(base, "exp_small_log");
    const double r = base.ratio();
    check_poles(r, (1.0 - r) * z, z);
    LogValue out{1, 0.0};
    for_each_factor(r, (1.0 - r) * z, trunc, [&](double x) {
        const double f = 1.0 - x;
        if (f < 0) out.sign = -out.sign;
        out.log_abs -= std::abs(x) < 0.5 ? std::log1p(-x) : std::log(std::abs(f));
    });
    return out;
}

LogValue trig_big_log(TrigKind kind, const PQBase& base, double z, const SeriesTruncation& trunc) {
    require_contracting(base, "trig_big_log");
    if (is_small_family(kind)) {
        throw DomainError(fmt::format("trig_big_log: {} is not in the big family", to_string(kind)));
    }
    if (std::abs(z) <= 2.0) return LogValue::from(trig_eval(kind, base, z, trunc));
    const double r = base.ratio();
    const double x0 = (1.0 - r) * z;
    if (kind == TrigKind::CosBig || kind == TrigKind::SinBig) {
        // log E(iz) = sum log(1 + i x_k).
        double re = 0.0;
        double im = 0.0;
        for_each_factor(r, x0, trunc, [&](double x) {
            re += 0.5 * std::log1p(x * x);
            im += std::atan(x);
        });
        const double c = kind == TrigKind::CosBig ? std::cos(im) : std::sin(im);
        LogValue v = LogValue::from(c);
        if (v.sign != 0) v.log_abs += re;
        return v;
    }
    // E(+-|z|) = E(|z|) * R^{(0 or 1)}, R = prod (1 - x_k)/(1 + x_k).
    const double az = std::abs(z);
    double log_e = 0.0;
    double ratio = 1.0;
    for_each_factor(r, (1.0 - r) * az, trunc, [&](double x) {
        log_e += std::log1p(x);
        ratio *= (1.0 - x) / (1.0 + x);
    });
    const double combo = kind == TrigKind::CoshBig ? 1.0 + ratio : 1.0 - ratio;
    LogValue v = LogValue::from(0.5 * combo);
    if (v.sign != 0) v.log_abs += log_e;
    if (kind == TrigKind::SinhBig && z < 0) v.sign = -v.sign;
    return v;
}

namespace {

void check_gamma_args(const PQBase& base, double z, const char* op) {
    base.require_full_grid(op);
    if (!(z > 0.0) || !std::isfinite(z)) {
        throw DomainError(fmt::format("{}: z = {} must be positive", op, z));
    }
}

double first_kind_moment(const PQBase& base, double z, const GridConfig& grid,
                         const SeriesTruncation& trunc) {
    const double q = base.q();
    // E(-qt) vanishes on every grid point beyond p/(p-q): the improper grid
    // anchored there collapses to this finite integral.
    const double upper = base.p() / (base.p() - q);
    auto f = [&](double t) { return std::pow(t, z - 1.0) * exp_big(base, -q * t, trunc); };
    return pq_integral_finite(f, base, upper, grid).value;
}

}  // namespace

double gamma_first_integral(const PQBase& base, double z, const GridConfig& grid,
                            const SeriesTruncation& trunc) {
    check_gamma_args(base, z, "gamma_first");
    return std::pow(base.p(), 0.5 * z * (z - 1.0)) * first_kind_moment(base, z, grid, trunc);
}

double gamma_first_uncorrected(const PQBase& base, double z, const GridConfig& grid,
                               const SeriesTruncation& trunc) {
    check_gamma_args(base, z, "gamma_first");
    return std::pow(base.p(), 0.5 * (z - 1.0) * (z - 2.0)) * first_kind_moment(base, z, grid, trunc);
}

double gamma_first(const PQBase& base, double z, const GridConfig& grid,
                   const SeriesTruncation& trunc) {
    check_gamma_args(base, z, "gamma_first");
    if (z == std::floor(z) && z - 1.0 <= kMaxFactorialArgument) {
        return pq_factorial(base, static_cast<int>(z) - 1);
    }
    return gamma_first_integral(base, z, grid, trunc);
}

double gamma_second(const PQBase& base, double z, const GridConfig& grid,
                    const SeriesTruncation& trunc) {
    check_gamma_args(base, z, "gamma_second");
    const double p = base.p();
    auto f = [&](double t) {
        LogValue v = exp_small_log(base, -p * t, trunc);
        v.log_abs += (z - 1.0) * std::log(t);
        return v;
    };
    const double integral = pq_integral_improper_log(f, base, grid).value;
    return std::pow(base.q(), 0.5 * z * (z - 1.0)) * integral;
}

}  // namespace pqcalc
