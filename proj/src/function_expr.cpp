#include "pqcalc/function_expr.hpp"

#include <algorithm>
#include <cmath>

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

void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw DomainError(fmt::format("{}: parameter must be finite", what));
}

}  // namespace

void validate(const Atom& atom) {
    std::visit(overloaded{
                   [](const fn::Const& f) { require_finite(f.c, "Const"); },
                   [](const fn::Monomial& f) {
                       if (f.n < 0) throw DomainError(fmt::format("Monomial: n = {} < 0", f.n));
                   },
                   [](const fn::Power& f) {
                       require_finite(f.alpha, "Power");
                       if (!(f.alpha > -1.0)) {
                           throw DomainError(fmt::format("Power: alpha = {} must be > -1", f.alpha));
                       }
                   },
                   [](const fn::MonomialTimesExpSmall& f) {
                       if (f.n < 0) throw DomainError("MonomialTimesExpSmall: n < 0");
                       require_finite(f.a, "MonomialTimesExpSmall");
                   },
                   [](const fn::MonomialTimesExpBig& f) {
                       if (f.n < 0) throw DomainError("MonomialTimesExpBig: n < 0");
                       require_finite(f.a, "MonomialTimesExpBig");
                   },
                   [](const auto& f) { require_finite(f.a, "function parameter"); },
               },
               atom);
}

FunctionExpr::FunctionExpr(Atom atom) : node_(std::move(atom)) {
    validate(std::get<Atom>(node_));
}

FunctionExpr FunctionExpr::sum(std::vector<SumEntry> entries) {
    if (entries.empty()) throw DomainError("Sum needs at least one entry");
    for (const auto& e : entries) {
        require_finite(e.coeff, "Sum coefficient");
        validate(e.atom);
    }
    FunctionExpr out;
    out.node_ = std::move(entries);
    return out;
}

const Atom& FunctionExpr::atom() const {
    if (is_sum()) throw DomainError("FunctionExpr::atom called on a Sum");
    return std::get<Atom>(node_);
}

const std::vector<SumEntry>& FunctionExpr::entries() const {
    if (!is_sum()) throw DomainError("FunctionExpr::entries called on a single member");
    return std::get<std::vector<SumEntry>>(node_);
}

std::vector<SumEntry> FunctionExpr::terms() const {
    if (is_sum()) return entries();
    return {SumEntry{1.0, atom()}};
}

double evaluate(const Atom& atom, const PQBase& base, double t) {
    auto trig = [&](TrigKind k, double a) { return trig_eval(k, base, a * t); };
    return std::visit(
        overloaded{
            [](const fn::Const& f) { return f.c; },
            [&](const fn::Monomial& f) { return f.n == 0 ? 1.0 : std::pow(t, f.n); },
            [&](const fn::Power& f) { return std::pow(t, f.alpha); },
            [&](const fn::ExpSmall& f) { return exp_small(base, f.a * t); },
            [&](const fn::ExpBig& f) { return exp_big(base, f.a * t); },
            [&](const fn::Cos& f) { return trig(TrigKind::CosSmall, f.a); },
            [&](const fn::Sin& f) { return trig(TrigKind::SinSmall, f.a); },
            [&](const fn::BigCos& f) { return trig(TrigKind::CosBig, f.a); },
            [&](const fn::BigSin& f) { return trig(TrigKind::SinBig, f.a); },
            [&](const fn::Cosh& f) { return trig(TrigKind::CoshSmall, f.a); },
            [&](const fn::Sinh& f) { return trig(TrigKind::SinhSmall, f.a); },
            [&](const fn::BigCosh& f) { return trig(TrigKind::CoshBig, f.a); },
            [&](const fn::BigSinh& f) { return trig(TrigKind::SinhBig, f.a); },
            [&](const fn::MonomialTimesExpSmall& f) {
                return (f.n == 0 ? 1.0 : std::pow(t, f.n)) * exp_small(base, f.a * t);
            },
            [&](const fn::MonomialTimesExpBig& f) {
                return (f.n == 0 ? 1.0 : std::pow(t, f.n)) * exp_big(base, f.a * t);
            },
        },
        atom);
}

double evaluate(const FunctionExpr& f, const PQBase& base, double t) {
    if (!f.is_sum()) return evaluate(f.atom(), base, t);
    CompensatedSum<double> acc;
    for (const auto& e : f.entries()) acc.add(e.coeff * evaluate(e.atom, base, t));
    return acc.value();
}

namespace {

LogValue log_power(double t, double exponent) {
    if (exponent == 0.0) return {1, 0.0};
    if (t == 0.0) return exponent > 0 ? LogValue{} : LogValue{1, INFINITY};
    int sign = 1;
    if (t < 0) {
        // Only integer exponents reach here with t < 0.
        sign = (static_cast<long long>(exponent) % 2 == 0) ? 1 : -1;
    }
    return {sign, exponent * std::log(std::abs(t))};
}

LogValue evaluate_log_atom(const Atom& atom, const PQBase& base, double t) {
    const bool contracting = std::abs(base.ratio()) < 1.0;
    auto big_trig = [&](TrigKind k, double a) {
        return contracting ? trig_big_log(k, base, a * t) : LogValue::from(trig_eval(k, base, a * t));
    };
    auto big_exp = [&](double a) {
        return contracting ? exp_big_log(base, a * t) : LogValue::from(exp_big(base, a * t));
    };
    return std::visit(
        overloaded{
            [&](const fn::Monomial& f) { return log_power(t, f.n); },
            [&](const fn::Power& f) { return log_power(t, f.alpha); },
            [&](const fn::ExpBig& f) { return big_exp(f.a); },
            [&](const fn::BigCos& f) { return big_trig(TrigKind::CosBig, f.a); },
            [&](const fn::BigSin& f) { return big_trig(TrigKind::SinBig, f.a); },
            [&](const fn::BigCosh& f) { return big_trig(TrigKind::CoshBig, f.a); },
            [&](const fn::BigSinh& f) { return big_trig(TrigKind::SinhBig, f.a); },
            [&](const fn::MonomialTimesExpBig& f) { return log_power(t, f.n) * big_exp(f.a); },
            [&](const auto&) { return LogValue::from(evaluate(atom, base, t)); },
        },
        atom);
}

}  // namespace

LogValue evaluate_log(const FunctionExpr& f, const PQBase& base, double t) {
    if (!f.is_sum()) return evaluate_log_atom(f.atom(), base, t);
    std::vector<LogValue> parts;
    double top = -INFINITY;
    for (const auto& e : f.entries()) {
        LogValue v = LogValue::from(e.coeff) * evaluate_log_atom(e.atom, base, t);
        if (v.sign != 0) top = std::max(top, v.log_abs);
        parts.push_back(v);
    }
    if (top == -INFINITY) return {};
    CompensatedSum<double> acc;
    for (const auto& v : parts) {
        if (v.sign != 0) acc.add(v.sign * std::exp(v.log_abs - top));
    }
    LogValue out = LogValue::from(acc.value());
    if (out.sign != 0) out.log_abs += top;
    return out;
}

namespace {

double exp_coefficient(const PQBase& base, bool small, double a, int k) {
    const double w = small ? base.p() : base.q();
    return std::pow(w, static_cast<double>(choose2(k))) * std::pow(a, k) / pq_factorial(base, k);
}

double atom_coefficient(const Atom& atom, const PQBase& base, int k) {
    auto trig = [&](TrigKind kind, double a) {
        return trig_series_coefficient(kind, base, k) * std::pow(a, k);
    };
    return std::visit(
        overloaded{
            [&](const fn::Const& f) { return k == 0 ? f.c : 0.0; },
            [&](const fn::Monomial& f) { return k == f.n ? 1.0 : 0.0; },
            [&](const fn::Power& f) {
                if (f.alpha == std::floor(f.alpha)) return k == f.alpha ? 1.0 : 0.0;
                if (k < f.alpha) return 0.0;
                throw DomainError(fmt::format(
                    "t^{} has no Taylor coefficient of order {} at 0", f.alpha, k));
            },
            [&](const fn::ExpSmall& f) { return exp_coefficient(base, true, f.a, k); },
            [&](const fn::ExpBig& f) { return exp_coefficient(base, false, f.a, k); },
            [&](const fn::Cos& f) { return trig(TrigKind::CosSmall, f.a); },
            [&](const fn::Sin& f) { return trig(TrigKind::SinSmall, f.a); },
            [&](const fn::BigCos& f) { return trig(TrigKind::CosBig, f.a); },
            [&](const fn::BigSin& f) { return trig(TrigKind::SinBig, f.a); },
            [&](const fn::Cosh& f) { return trig(TrigKind::CoshSmall, f.a); },
            [&](const fn::Sinh& f) { return trig(TrigKind::SinhSmall, f.a); },
            [&](const fn::BigCosh& f) { return trig(TrigKind::CoshBig, f.a); },
            [&](const fn::BigSinh& f) { return trig(TrigKind::SinhBig, f.a); },
            [&](const fn::MonomialTimesExpSmall& f) {
                return k < f.n ? 0.0 : exp_coefficient(base, true, f.a, k - f.n);
            },
            [&](const fn::MonomialTimesExpBig& f) {
                return k < f.n ? 0.0 : exp_coefficient(base, false, f.a, k - f.n);
            },
        },
        atom);
}

}  // namespace

double series_coefficient(const FunctionExpr& f, const PQBase& base, int k) {
    if (k < 0) throw DomainError("series_coefficient: k < 0");
    double acc = 0.0;
    for (const auto& e : f.terms()) acc += e.coeff * atom_coefficient(e.atom, base, k);
    return acc;
}

double initial_derivative(const FunctionExpr& f, const PQBase& base, int k) {
    return pq_factorial(base, k) * series_coefficient(f, base, k);
}

FunctionExpr dilate(const FunctionExpr& f, double alpha) {
    if (!std::isfinite(alpha)) throw DomainError("dilate: alpha must be finite");
    std::vector<SumEntry> out;
    for (const auto& e : f.terms()) {
        double coeff = e.coeff;
        Atom scaled = std::visit(
            overloaded{
                [&](const fn::Const& g) -> Atom { return g; },
                [&](const fn::Monomial& g) -> Atom {
                    coeff *= std::pow(alpha, g.n);
                    return g;
                },
                [&](const fn::Power& g) -> Atom {
                    if (alpha <= 0) throw DomainError("dilate: t^alpha needs alpha > 0 scaling");
                    coeff *= std::pow(alpha, g.alpha);
                    return g;
                },
                [&](const fn::MonomialTimesExpSmall& g) -> Atom {
                    coeff *= std::pow(alpha, g.n);
                    return fn::MonomialTimesExpSmall{g.n, g.a * alpha};
                },
                [&](const fn::MonomialTimesExpBig& g) -> Atom {
                    coeff *= std::pow(alpha, g.n);
                    return fn::MonomialTimesExpBig{g.n, g.a * alpha};
                },
                [&](auto g) -> Atom {
                    g.a *= alpha;
                    return g;
                },
            },
            e.atom);
        out.push_back({coeff, scaled});
    }
    if (!f.is_sum() && out.front().coeff == 1.0) return FunctionExpr(out.front().atom);
    return FunctionExpr::sum(std::move(out));
}

Atom canonical(const Atom& atom) {
    return std::visit(
        overloaded{
            [](const fn::Monomial& f) -> Atom {
                if (f.n == 0) return fn::Const{1.0};
                return f;
            },
            [](const fn::ExpSmall& f) -> Atom {
                if (f.a == 0.0) return fn::Const{1.0};
                return f;
            },
            [](const fn::ExpBig& f) -> Atom {
                if (f.a == 0.0) return fn::Const{1.0};
                return f;
            },
            [](const fn::MonomialTimesExpSmall& f) -> Atom {
                if (f.a == 0.0) return canonical(fn::Monomial{f.n});
                if (f.n == 0) return fn::ExpSmall{f.a};
                return f;
            },
            [](const fn::MonomialTimesExpBig& f) -> Atom {
                if (f.a == 0.0) return canonical(fn::Monomial{f.n});
                if (f.n == 0) return fn::ExpBig{f.a};
                return f;
            },
            [](const auto& f) -> Atom { return f; },
        },
        atom);
}

namespace {

std::string arg_string(double a) {
    if (a == 1.0) return "t";
    if (a == -1.0) return "-t";
    return fmt::format("{}t", a);
}

std::string monomial_string(int n) {
    if (n == 1) return "t";
    return fmt::format("t^{}", n);
}

}  // namespace

std::string to_string(const Atom& atom) {
    auto call = [](const char* name, double a) { return fmt::format("{}({})", name, arg_string(a)); };
    return std::visit(
        overloaded{
            [](const fn::Const& f) { return fmt::format("{}", f.c); },
            [](const fn::Monomial& f) { return monomial_string(f.n); },
            [](const fn::Power& f) { return fmt::format("t^({})", f.alpha); },
            [&](const fn::ExpSmall& f) { return call("e", f.a); },
            [&](const fn::ExpBig& f) { return call("E", f.a); },
            [&](const fn::Cos& f) { return call("cos", f.a); },
            [&](const fn::Sin& f) { return call("sin", f.a); },
            [&](const fn::BigCos& f) { return call("Cos", f.a); },
            [&](const fn::BigSin& f) { return call("Sin", f.a); },
            [&](const fn::Cosh& f) { return call("cosh", f.a); },
            [&](const fn::Sinh& f) { return call("sinh", f.a); },
            [&](const fn::BigCosh& f) { return call("Cosh", f.a); },
            [&](const fn::BigSinh& f) { return call("Sinh", f.a); },
            [&](const fn::MonomialTimesExpSmall& f) {
                return monomial_string(f.n) + "*" + call("e", f.a);
            },
            [&](const fn::MonomialTimesExpBig& f) {
                return monomial_string(f.n) + "*" + call("E", f.a);
            },
        },
        atom);
}

std::string to_string(const FunctionExpr& f) {
    if (!f.is_sum()) return to_string(f.atom());
    const auto& entries = f.entries();
    std::string out;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        const bool negative = std::signbit(e.coeff);
        if (i == 0) {
            if (negative) out += "-";
        } else {
            out += negative ? " - " : " + ";
        }
        const double mag = std::abs(e.coeff);
        const bool unit_const = e.atom == Atom{fn::Const{1.0}};
        if (unit_const && entries.size() > 1) {
            out += fmt::format("{}", mag);
        } else {
            out += fmt::format("{}*{}", mag, to_string(e.atom));
        }
    }
    return out;
}

}  // namespace pqcalc
