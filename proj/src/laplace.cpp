#include "pqcalc/laplace.hpp"

#include <cmath>
#include <optional>

#include <fmt/format.h>

#include "pqcalc/arith.hpp"
#include "pqcalc/errors.hpp"
#include "pqcalc/special.hpp"

namespace pqcalc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_s(const PQBase& base, double s) {
    base.require_full_grid("(p,q)-Laplace transform");
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw DomainError(fmt::format("transform needs s > 0 (got s = {})", s));
    }
}

// Right end of the first-kind support.
double first_kind_support(const PQBase& base, double s) {
    return base.p() / ((base.p() - base.q()) * s);
}

}  // namespace

QuadratureResult transform_numeric(const ScalarFunction& f, const PQBase& base, double s,
                                   TransformKind kind, const GridConfig& grid) {
    check_s(base, s);
    const double p = base.p();
    const double q = base.q();
    if (kind == TransformKind::FirstKind) {
        auto g = [&](double t) {
            const double k = exp_big(base, -q * s * t);
            return k == 0.0 ? 0.0 : f(t) * k;
        };
        return pq_integral_finite(g, base, first_kind_support(base, s), grid);
    }
    auto g = [&](double t) {
        const double k = exp_small(base, -p * s * t);
        return k == 0.0 ? 0.0 : f(t) * k;
    };
    return pq_integral_improper(g, base, grid);
}

QuadratureResult transform_numeric(const FunctionExpr& f, const PQBase& base, double s,
                                   TransformKind kind, const GridConfig& grid) {
    check_s(base, s);
    if (kind == TransformKind::FirstKind) {
        return transform_numeric([&](double t) { return evaluate(f, base, t); }, base, s, kind, grid);
    }
    const double p = base.p();
    auto g = [&](double t) {
        const LogValue k = exp_small_log(base, -p * s * t);
        return k.sign == 0 ? LogValue{} : evaluate_log(f, base, t) * k;
    };
    return pq_integral_improper_log(g, base, grid);
}

double validity_threshold(const Atom& atom, const PQBase& base, TransformKind kind) {
    const double w = kind == TransformKind::FirstKind ? base.p() : base.q();
    return std::visit(
        overloaded{
            [](const fn::Const&) { return 0.0; },
            [](const fn::Monomial&) { return 0.0; },
            [](const fn::Power&) { return 0.0; },
            [&](const fn::ExpSmall& f) {
                return kind == TransformKind::FirstKind ? std::max(f.a, 0.0) / w : std::abs(f.a) / w;
            },
            [&](const fn::MonomialTimesExpSmall& f) {
                return kind == TransformKind::FirstKind ? std::max(f.a, 0.0) / w : std::abs(f.a) / w;
            },
            [&](const fn::ExpBig& f) {
                return kind == TransformKind::FirstKind ? 0.0 : std::abs(f.a) / w;
            },
            [&](const fn::MonomialTimesExpBig& f) {
                if (kind == TransformKind::FirstKind) return 0.0;
                return std::abs(f.a) * std::pow(base.p(), f.n) / std::pow(base.q(), f.n + 1);
            },
            [&](const auto& f) { return std::abs(f.a) / w; },
        },
        atom);
}

namespace {

[[noreturn]] void unsupported(const Atom& atom, TransformKind kind) {
    throw UnsupportedError(fmt::format("no {}-kind table entry for {}", to_string(kind), to_string(atom)));
}

// Shape of L{atom} with unit weight.
TransformShape table_shape(const Atom& atom, const PQBase& base, TransformKind kind) {
    const bool first = kind == TransformKind::FirstKind;
    // Exponent pair of the transform's scale letter w (p or q) and the other one.
    auto wq = [&](int we, int oe) { return first ? std::pair{we, oe} : std::pair{oe, we}; };
    auto quadratic = [&](bool s_num, double a, int sigma) {
        QuadraticTerm t;
        t.s_numerator = s_num;
        const auto [pe, qe] = wq(s_num ? 2 : 1, 0);
        t.p_exp = pe;
        t.q_exp = qe;
        const auto [bp, bq] = wq(1, 0);
        t.base_p = bp;
        t.base_q = bq;
        t.a = a;
        t.sigma = sigma;
        return TransformShape{t};
    };
    // w^{n+1} o^{C(n+1,2)} [n]! / prod_k (w^{n+1-k} o^k s - a o^n).
    auto monomial_exp = [&](int n, double a) {
        RationalTerm r;
        const auto [pe, qe] = wq(n + 1 - static_cast<int>(choose2(n + 2)), 0);
        r.p_exp = pe;
        r.q_exp = qe;
        r.factorial = n;
        for (int k = 0; k <= n; ++k) {
            const auto [fp, fq] = wq(-(n + 1 - k), n - k);
            r.factors.push_back({a, fp, fq});
        }
        return TransformShape{r};
    };
    return std::visit(
        overloaded{
            [&](const fn::Const&) -> TransformShape { return RationalTerm{0, 0, 0, 1, {}}; },
            [&](const fn::Monomial& f) -> TransformShape {
                RationalTerm r;
                const auto [pe, qe] = wq(-static_cast<int>(choose2(f.n + 1)), 0);
                r.p_exp = pe;
                r.q_exp = qe;
                r.factorial = f.n;
                r.s_power = f.n + 1;
                return r;
            },
            [&](const fn::Power& f) -> TransformShape {
                const double g = first ? gamma_first(base, f.alpha + 1.0) : gamma_second(base, f.alpha + 1.0);
                return PowerLawTerm{f.alpha, g};
            },
            [&](const fn::ExpSmall& f) -> TransformShape {
                if (!first) unsupported(atom, kind);
                return monomial_exp(0, f.a);
            },
            [&](const fn::ExpBig& f) -> TransformShape {
                if (first) return SeriesRuleTerm{f.a};
                return monomial_exp(0, f.a);
            },
            [&](const fn::MonomialTimesExpSmall& f) -> TransformShape {
                if (!first) unsupported(atom, kind);
                return monomial_exp(f.n, f.a);
            },
            [&](const fn::MonomialTimesExpBig& f) -> TransformShape {
                if (first) unsupported(atom, kind);
                return monomial_exp(f.n, f.a);
            },
            [&](const fn::Cos& f) -> TransformShape {
                if (!first) unsupported(atom, kind);
                return quadratic(true, f.a, 1);
            },
            [&](const fn::Sin& f) -> TransformShape {
                if (!first) unsupported(atom, kind);
                return quadratic(false, f.a, 1);
            },
            [&](const fn::Cosh& f) -> TransformShape {
                if (!first) unsupported(atom, kind);
                return quadratic(true, f.a, -1);
            },
            [&](const fn::Sinh& f) -> TransformShape {
                if (!first) unsupported(atom, kind);
                return quadratic(false, f.a, -1);
            },
            [&](const fn::BigCos& f) -> TransformShape {
                if (first) unsupported(atom, kind);
                return quadratic(true, f.a, 1);
            },
            [&](const fn::BigSin& f) -> TransformShape {
                if (first) unsupported(atom, kind);
                return quadratic(false, f.a, 1);
            },
            [&](const fn::BigCosh& f) -> TransformShape {
                if (first) unsupported(atom, kind);
                return quadratic(true, f.a, -1);
            },
            [&](const fn::BigSinh& f) -> TransformShape {
                if (first) unsupported(atom, kind);
                return quadratic(false, f.a, -1);
            },
        },
        atom);
}

}  // namespace

TransformExpr transform_table(const FunctionExpr& f, const PQBase& base, TransformKind kind) {
    base.require_full_grid("transform_table");
    TransformExpr out(base, kind);
    for (const auto& e : f.terms()) {
        double weight = e.coeff;
        if (const auto* c = std::get_if<fn::Const>(&e.atom)) weight *= c->c;
        out.add(weight, table_shape(e.atom, base, kind), validity_threshold(e.atom, base, kind));
    }
    return out;
}

TransformExpr scaling_apply(const TransformExpr& F, double a) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw DomainError(fmt::format("scaling needs a > 0 (got a = {})", a));
    }
    TransformExpr out(F.base(), F.kind());
    out.add(1.0, ScaledTerm{std::make_shared<const TransformExpr>(F), a}, a * F.s_min());
    return out;
}

TransformFunction scaling_apply(TransformFunction F, double a) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw DomainError(fmt::format("scaling needs a > 0 (got a = {})", a));
    }
    return [F = std::move(F), a](double s) { return F(s / a) / a; };
}

double derivative_of_transform(const TransformFunction& F, const PQBase& base, int n, double s,
                               TransformKind kind) {
    if (n < 0) throw DomainError("derivative order must be >= 0");
    if (n == 0) return F(s);
    const double w = kind == TransformKind::FirstKind ? base.q() : base.p();
    const double shrink = std::pow(w, -n);
    auto g = [&](double x) { return F(shrink * x); };
    const double d = pq_derivative_iterated(g, base, n, s);
    const double sign = n % 2 == 0 ? 1.0 : -1.0;
    return sign * std::pow(w, static_cast<double>(choose2(n))) * d;
}

TransformExpr derivative_of_transform(const TransformExpr& F, int n) {
    if (n < 0) throw DomainError("derivative order must be >= 0");
    const bool first = F.kind() == TransformKind::FirstKind;
    const TransformExpr shifted = first ? substitute_scale(F, 0, -n) : substitute_scale(F, -n, 0);
    const TransformExpr d = symbolic_q_derivative(shifted, n);
    const int c = static_cast<int>(choose2(n));
    return multiply_monomial(d, n % 2 == 0 ? 1.0 : -1.0, first ? 0 : c, first ? c : 0, 0);
}

double transform_of_derivative(const TransformFunction& F, const std::vector<double>& initial_derivs,
                               const PQBase& base, int n, double s, TransformKind kind) {
    if (n < 1) throw DomainError("transform_of_derivative needs n >= 1");
    if (static_cast<int>(initial_derivs.size()) != n) {
        throw DomainError(fmt::format("transform_of_derivative: arity mismatch, {} initial derivatives for n = {}",
                                      initial_derivs.size(), n));
    }
    if (!(s > 0.0)) throw DomainError("transform_of_derivative needs s > 0");
    const double w = kind == TransformKind::FirstKind ? base.p() : base.q();
    double value = std::pow(s, n) / std::pow(w, static_cast<double>(choose2(n + 1))) * F(s / std::pow(w, n));
    for (int k = 0; k < n; ++k) {
        value -= std::pow(s, n - 1 - k) / std::pow(w, static_cast<double>(choose2(n - k))) * initial_derivs[k];
    }
    return value;
}

TransformExpr transform_of_derivative(const TransformExpr& F, const std::vector<double>& initial_derivs,
                                      int n) {
    if (n < 1) throw DomainError("transform_of_derivative needs n >= 1");
    if (static_cast<int>(initial_derivs.size()) != n) {
        throw DomainError(fmt::format("transform_of_derivative: arity mismatch, {} initial derivatives for n = {}",
                                      initial_derivs.size(), n));
    }
    const bool first = F.kind() == TransformKind::FirstKind;
    const TransformExpr shifted = first ? substitute_scale(F, -n, 0) : substitute_scale(F, 0, -n);
    const int c = static_cast<int>(choose2(n + 1));
    TransformExpr out = multiply_monomial(shifted, 1.0, first ? -c : 0, first ? 0 : -c, n);
    for (int k = 0; k < n; ++k) {
        if (initial_derivs[k] == 0.0) continue;
        RationalTerm r;
        const int e = -static_cast<int>(choose2(n - k));
        r.p_exp = first ? e : 0;
        r.q_exp = first ? 0 : e;
        r.s_power = -(n - 1 - k);
        out.add(-initial_derivs[k], r);
    }
    return out;
}

FunctionExpr canonical(const FunctionExpr& f) {
    if (!f.is_sum()) return FunctionExpr(canonical(f.atom()));
    std::vector<SumEntry> entries;
    for (const auto& e : f.entries()) {
        Atom a = canonical(e.atom);
        double coeff = e.coeff;
        if (const auto* c = std::get_if<fn::Const>(&a)) {
            coeff *= c->c;
            a = fn::Const{1.0};
        }
        entries.push_back({coeff, a});
    }
    if (entries.size() == 1) {
        const auto& only = entries.front();
        if (only.atom == Atom{fn::Const{1.0}}) return FunctionExpr(fn::Const{only.coeff});
        if (only.coeff == 1.0) return FunctionExpr(only.atom);
    }
    return FunctionExpr::sum(std::move(entries));
}

namespace {

[[noreturn]] void not_invertible(const TransformExpr& F, const TransformTerm& t, const std::string& why) {
    TransformExpr residual(F.base(), F.kind());
    residual.add(t.weight, t.shape);
    throw NotInvertibleError(fmt::format("no table entry matches {} ({})", to_string(residual), why),
                             to_string(residual));
}

// Weight that turns the table term of `candidate` into `r`, or nullopt.
std::optional<double> match_rational(const RationalTerm& r, double weight, const Atom& candidate,
                                     const PQBase& base, TransformKind kind) {
    TransformExpr probe(base, kind);
    probe.add(1.0, table_shape(candidate, base, kind));
    const auto& e = std::get<RationalTerm>(probe.terms().front().shape);
    if (e.s_power != r.s_power || e.factors.size() != r.factors.size()) return std::nullopt;
    for (std::size_t i = 0; i < e.factors.size(); ++i) {
        const double x = e.factors[i].shift(base);
        const double y = r.factors[i].shift(base);
        if (std::abs(x - y) > 1e-13 * std::max(std::abs(x), std::abs(y))) return std::nullopt;
    }
    if (e.p_exp == r.p_exp && e.q_exp == r.q_exp && e.factorial == r.factorial) return weight;
    return weight * rational_coefficient(r, base) / rational_coefficient(e, base);
}

SumEntry invert_term(const TransformExpr& F, const TransformTerm& t) {
    const PQBase& base = F.base();
    const TransformKind kind = F.kind();
    const bool first = kind == TransformKind::FirstKind;
    if (const auto* r = std::get_if<RationalTerm>(&t.shape)) {
        Atom candidate;
        if (r->factors.empty() && r->s_power >= 1) {
            const int n = r->s_power - 1;
            candidate = n == 0 ? Atom{fn::Const{1.0}} : Atom{fn::Monomial{n}};
        } else if (!r->factors.empty() && r->s_power == 0) {
            const int n = static_cast<int>(r->factors.size()) - 1;
            // The factor (s - a/w) carries a itself.
            const int want_p = first ? -1 : 0;
            const int want_q = first ? 0 : -1;
            double a = r->factors.back().shift(base) * (first ? base.p() : base.q());
            for (const auto& f : r->factors) {
                if (f.pe == want_p && f.qe == want_q) a = f.c;
            }
            if (first) {
                candidate = n == 0 ? Atom{fn::ExpSmall{a}} : Atom{fn::MonomialTimesExpSmall{n, a}};
            } else {
                candidate = n == 0 ? Atom{fn::ExpBig{a}} : Atom{fn::MonomialTimesExpBig{n, a}};
            }
        } else {
            not_invertible(F, t, "rational shape outside the table");
        }
        const auto w = match_rational(*r, t.weight, candidate, base, kind);
        if (!w) not_invertible(F, t, "factor pattern does not match");
        return {*w, candidate};
    }
    if (const auto* qd = std::get_if<QuadraticTerm>(&t.shape)) {
        const int want_base_p = first ? 1 : 0;
        const int want_base_q = first ? 0 : 1;
        const int lead = qd->s_numerator ? 2 : 1;
        const bool ok = qd->base_p == want_base_p && qd->base_q == want_base_q &&
                        qd->p_exp == (first ? lead : 0) && qd->q_exp == (first ? 0 : lead) &&
                        (qd->sigma == 1 || qd->sigma == -1);
        if (!ok) not_invertible(F, t, "quadratic scaling outside the table");
        const double a = qd->a;
        Atom atom;
        if (qd->sigma == 1) {
            if (first) atom = qd->s_numerator ? Atom{fn::Cos{a}} : Atom{fn::Sin{a}};
            else atom = qd->s_numerator ? Atom{fn::BigCos{a}} : Atom{fn::BigSin{a}};
        } else {
            if (first) atom = qd->s_numerator ? Atom{fn::Cosh{a}} : Atom{fn::Sinh{a}};
            else atom = qd->s_numerator ? Atom{fn::BigCosh{a}} : Atom{fn::BigSinh{a}};
        }
        return {t.weight, atom};
    }
    if (const auto* pl = std::get_if<PowerLawTerm>(&t.shape)) {
        return {t.weight, fn::Power{pl->alpha}};
    }
    if (std::holds_alternative<SeriesRuleTerm>(t.shape)) {
        not_invertible(F, t, "series rules have no closed-form inverse");
    }
    not_invertible(F, t, "scaled transforms are not inverted");
}

}  // namespace

FunctionExpr invert_by_table(const TransformExpr& F) {
    if (F.terms().empty()) return FunctionExpr(fn::Const{0.0});
    std::vector<SumEntry> entries;
    for (const auto& t : F.terms()) entries.push_back(invert_term(F, t));
    if (entries.size() == 1) {
        const auto& only = entries.front();
        if (only.atom == Atom{fn::Const{1.0}}) return FunctionExpr(fn::Const{only.coeff});
        if (only.coeff == 1.0) return FunctionExpr(only.atom);
    }
    return FunctionExpr::sum(std::move(entries));
}

}  // namespace pqcalc
