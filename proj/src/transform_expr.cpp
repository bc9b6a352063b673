#include "pqcalc/transform_expr.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "pqcalc/arith.hpp"
#include "pqcalc/errors.hpp"
#include "pqcalc/summation.hpp"

namespace pqcalc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kStructTol = 1e-13;

bool close(double x, double y) {
    if (x == y) return true;
    return std::abs(x - y) <= kStructTol * std::max(std::abs(x), std::abs(y));
}

double pq_pow(const PQBase& base, int pe, int qe) {
    return std::pow(base.p(), pe) * std::pow(base.q(), qe);
}

}  // namespace

std::string to_string(TransformKind kind) {
    return kind == TransformKind::FirstKind ? "first" : "second";
}

double LinearFactor::shift(const PQBase& base) const { return c * pq_pow(base, pe, qe); }

double SeriesRuleTerm::coefficient(const PQBase& base, int n) const {
    const double r = base.ratio();
    return std::pow(r, static_cast<double>(choose2(n))) * std::pow(a / base.p(), n);
}

RationalTerm canonical(RationalTerm term, const PQBase& base) {
    std::vector<LinearFactor> kept;
    for (const auto& f : term.factors) {
        if (f.c == 0.0) {
            ++term.s_power;
        } else {
            kept.push_back(f);
        }
    }
    std::stable_sort(kept.begin(), kept.end(), [&](const LinearFactor& x, const LinearFactor& y) {
        return x.shift(base) > y.shift(base);
    });
    term.factors = std::move(kept);
    if (term.factorial <= 1) term.factorial = 0;
    return term;
}

double rational_coefficient(const RationalTerm& term, const PQBase& base) {
    return pq_pow(base, term.p_exp, term.q_exp) * pq_factorial(base, term.factorial);
}

double shape_value(const TransformShape& shape, const PQBase& base, TransformKind kind, double s) {
    return std::visit(
        overloaded{
            [&](const RationalTerm& t) {
                double den = std::pow(s, t.s_power);
                for (const auto& f : t.factors) den *= s - f.shift(base);
                return rational_coefficient(t, base) / den;
            },
            [&](const QuadraticTerm& t) {
                const double bs = pq_pow(base, t.base_p, t.base_q) * s;
                const double num = t.s_numerator ? s : t.a;
                return pq_pow(base, t.p_exp, t.q_exp) * num / (bs * bs + t.sigma * t.a * t.a);
            },
            [&](const PowerLawTerm& t) {
                const double w = kind == TransformKind::FirstKind ? base.p() : base.q();
                return t.gamma_value /
                       (std::pow(w, 0.5 * t.alpha * (t.alpha + 1.0)) * std::pow(s, t.alpha + 1.0));
            },
            [&](const SeriesRuleTerm& t) {
                // Entire in 1/s: the coefficients fall like (q/p)^{n^2/2}.
                CompensatedSum<double> acc;
                const double x = 1.0 / s;
                double xn = x;
                int small = 0;
                for (int n = 0; n < 4000; ++n) {
                    const double term = t.coefficient(base, n) * xn;
                    acc.add(term);
                    if (std::abs(term) <= 1e-17 * std::abs(acc.value())) {
                        if (++small >= 3) return acc.value();
                    } else {
                        small = 0;
                    }
                    xn *= x;
                }
                throw TruncationError("series rule did not converge", acc.value(), 4000, 0.0, "series");
            },
            [&](const ScaledTerm& t) { return t.inner->evaluate(s / t.dilation) / t.dilation; },
        },
        shape);
}

void TransformExpr::add(double weight, TransformShape shape, double s_min) {
    if (auto* r = std::get_if<RationalTerm>(&shape)) *r = canonical(std::move(*r), base_);
    terms_.push_back({weight, std::move(shape)});
    s_min_ = std::max(s_min_, s_min);
}

void TransformExpr::append(const TransformExpr& other) {
    if (!(other.base_ == base_) || other.kind_ != kind_) {
        throw DomainError("cannot add transforms with different bases or kinds");
    }
    for (const auto& t : other.terms_) terms_.push_back(t);
    s_min_ = std::max(s_min_, other.s_min_);
}

double TransformExpr::evaluate(double s) const {
    if (!(s > s_min_)) {
        throw DomainError(fmt::format("transform evaluated at s = {} outside its validity half-line s > {}", s, s_min_));
    }
    CompensatedSum<double> acc;
    for (const auto& t : terms_) acc.add(t.weight * shape_value(t.shape, base_, kind_, s));
    return acc.value();
}

namespace {

bool shapes_equal(const TransformTerm& x, const TransformTerm& y, const PQBase& base) {
    if (x.shape.index() != y.shape.index()) return false;
    return std::visit(
        overloaded{
            [&](const RationalTerm& a) {
                const auto& b = std::get<RationalTerm>(y.shape);
                if (a.s_power != b.s_power || a.factors.size() != b.factors.size()) return false;
                if (!close(x.weight * rational_coefficient(a, base),
                           y.weight * rational_coefficient(b, base))) {
                    return false;
                }
                for (std::size_t i = 0; i < a.factors.size(); ++i) {
                    if (!close(a.factors[i].shift(base), b.factors[i].shift(base))) return false;
                }
                return true;
            },
            [&](const QuadraticTerm& a) {
                const auto& b = std::get<QuadraticTerm>(y.shape);
                return a.s_numerator == b.s_numerator && a.p_exp == b.p_exp && a.q_exp == b.q_exp &&
                       a.base_p == b.base_p && a.base_q == b.base_q && a.sigma == b.sigma &&
                       close(a.a * a.a, b.a * b.a) && close(x.weight * (a.s_numerator ? 1 : a.a),
                                                            y.weight * (b.s_numerator ? 1 : b.a));
            },
            [&](const PowerLawTerm& a) {
                const auto& b = std::get<PowerLawTerm>(y.shape);
                return a.alpha == b.alpha && close(x.weight * a.gamma_value, y.weight * b.gamma_value);
            },
            [&](const SeriesRuleTerm& a) {
                const auto& b = std::get<SeriesRuleTerm>(y.shape);
                return close(a.a, b.a) && close(x.weight, y.weight);
            },
            [&](const ScaledTerm& a) {
                const auto& b = std::get<ScaledTerm>(y.shape);
                return a.dilation == b.dilation && close(x.weight, y.weight) &&
                       a.inner->structurally_equal(*b.inner);
            },
        },
        x.shape);
}

}  // namespace

bool TransformExpr::structurally_equal(const TransformExpr& other) const {
    if (!(base_ == other.base_) || kind_ != other.kind_) return false;
    if (terms_.size() != other.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (!shapes_equal(terms_[i], other.terms_[i], base_)) return false;
    }
    return true;
}

namespace {

const RationalTerm& require_rational(const TransformTerm& t, const char* op) {
    const auto* r = std::get_if<RationalTerm>(&t.shape);
    if (!r) throw UnsupportedError(fmt::format("{}: only rational terms are supported", op));
    return *r;
}

}  // namespace

TransformExpr substitute_scale(const TransformExpr& f, int i, int j) {
    TransformExpr out(f.base(), f.kind());
    const double scale = pq_pow(f.base(), i, j);
    for (const auto& t : f.terms()) {
        RationalTerm r = require_rational(t, "substitute_scale");
        // (p^i q^j s)^{-m} and (p^i q^j s - c p^a q^b) = p^i q^j (s - c p^{a-i} q^{b-j}).
        const int m = r.s_power + static_cast<int>(r.factors.size());
        r.p_exp -= i * m;
        r.q_exp -= j * m;
        for (auto& fac : r.factors) {
            fac.pe -= i;
            fac.qe -= j;
        }
        out.add(t.weight, r, f.s_min() / scale);
    }
    return out;
}

TransformExpr multiply_monomial(const TransformExpr& f, double weight, int pe, int qe, int s_pow) {
    TransformExpr out(f.base(), f.kind());
    for (const auto& t : f.terms()) {
        RationalTerm r = require_rational(t, "multiply_monomial");
        r.p_exp += pe;
        r.q_exp += qe;
        r.s_power -= s_pow;
        out.add(t.weight * weight, r, f.s_min());
    }
    return out;
}

TransformExpr divide_by_factor(const TransformExpr& f, LinearFactor factor) {
    TransformExpr out(f.base(), f.kind());
    const double pole = factor.shift(f.base());
    for (const auto& t : f.terms()) {
        RationalTerm r = require_rational(t, "divide_by_factor");
        r.factors.push_back(factor);
        out.add(t.weight, r, std::max(f.s_min(), pole));
    }
    return out;
}

TransformExpr symbolic_q_derivative(const TransformExpr& f, int n) {
    if (n < 0) throw DomainError("derivative order must be >= 0");
    TransformExpr cur = f;
    for (int step = 0; step < n; ++step) {
        TransformExpr next(f.base(), f.kind());
        for (const auto& t : cur.terms()) {
            RationalTerm r = require_rational(t, "symbolic_q_derivative");
            const int m = r.s_power;
            const bool factorial_form =
                r.factors.empty() && m >= 1 && (r.factorial == m - 1 || (r.factorial == 0 && m <= 2));
            if (!factorial_form) {
                throw UnsupportedError("symbolic_q_derivative: term is not of the form c [m-1]!/s^m");
            }
            r.factorial = m;
            r.p_exp -= m;
            r.q_exp -= m;
            r.s_power = m + 1;
            next.add(-t.weight, r, cur.s_min());
        }
        cur = std::move(next);
    }
    return cur;
}

namespace {

std::string pq_monomial(int pe, int qe) {
    std::string out;
    auto part = [&](const char* sym, int e) {
        if (e == 0) return;
        if (!out.empty()) out += " ";
        out += e == 1 ? std::string(sym) : fmt::format("{}^{}", sym, e);
    };
    part("p", pe);
    part("q", qe);
    return out;
}

std::string shape_string(const TransformShape& shape, TransformKind kind) {
    return std::visit(
        overloaded{
            [&](const RationalTerm& r) {
                std::string num;
                if (r.factorial > 0) num = fmt::format("[{}]!", r.factorial);
                int pe = r.p_exp;
                int qe = r.q_exp;
                std::string den;
                // Negative exponents read better in the denominator.
                std::string den_mono = pq_monomial(pe < 0 ? -pe : 0, qe < 0 ? -qe : 0);
                std::string num_mono = pq_monomial(pe > 0 ? pe : 0, qe > 0 ? qe : 0);
                if (!num_mono.empty()) num += (num.empty() ? "" : " ") + num_mono;
                if (num.empty()) num = "1";
                auto add_den = [&](const std::string& piece) {
                    if (!den.empty()) den += " ";
                    den += piece;
                };
                if (!den_mono.empty()) add_den(den_mono);
                if (r.s_power == 1) add_den("s");
                if (r.s_power > 1) add_den(fmt::format("s^{}", r.s_power));
                if (r.s_power < 0) num += r.s_power == -1 ? " s" : fmt::format(" s^{}", -r.s_power);
                for (const auto& f : r.factors) {
                    const std::string mono = pq_monomial(f.pe, f.qe);
                    add_den(fmt::format("(s {} {}{})", f.c < 0 ? "+" : "-", std::abs(f.c), mono.empty() ? "" : " " + mono));
                }
                return den.empty() ? num : fmt::format("{}/({})", num, den);
            },
            [&](const QuadraticTerm& t) {
                const std::string mono = pq_monomial(t.p_exp, t.q_exp);
                const std::string bmono = pq_monomial(t.base_p, t.base_q);
                const std::string num = t.s_numerator ? "s" : fmt::format("{}", t.a);
                return fmt::format("{}{}/(({}{}s)^2 {} {}^2)", mono.empty() ? "" : mono + " ", num,
                                   bmono, bmono.empty() ? "" : " ", t.sigma > 0 ? "+" : "-", t.a);
            },
            [&](const PowerLawTerm& t) {
                const char* w = kind == TransformKind::FirstKind ? "p" : "q";
                return fmt::format("{}/({}^{} s^{})", t.gamma_value, w, 0.5 * t.alpha * (t.alpha + 1.0),
                                   t.alpha + 1.0);
            },
            [&](const SeriesRuleTerm& t) {
                return fmt::format("(1/s) sum_n (q/p)^C(n,2) ({}/(p s))^n", t.a);
            },
            [&](const ScaledTerm& t) {
                return fmt::format("(1/{0}) F(s/{0}) where F = {1}", t.dilation, to_string(*t.inner));
            },
        },
        shape);
}

}  // namespace

std::string to_string(const TransformExpr& f) {
    if (f.terms().empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < f.terms().size(); ++i) {
        const auto& t = f.terms()[i];
        if (i > 0) out += " + ";
        const std::string body = shape_string(t.shape, f.kind());
        out += t.weight == 1.0 ? body : fmt::format("{}*{}", t.weight, body);
    }
    return out;
}

}  // namespace pqcalc
