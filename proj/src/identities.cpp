#include "pqcalc/identities.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>

#include <fmt/format.h>

#include "pqcalc/arith.hpp"
#include "pqcalc/errors.hpp"
#include "pqcalc/laplace.hpp"
#include "pqcalc/special.hpp"

namespace pqcalc {

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
    return out;
}

// |lhs - rhs| / max(1, |rhs|)
double scaled_gap(double lhs, double rhs) { return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)); }
double relative_gap(double lhs, double rhs) { return std::abs(lhs - rhs) / std::abs(rhs); }

class SuiteBuilder {
public:
    explicit SuiteBuilder(std::string name) { report_.suite = std::move(name); }

    /// gap(x) over every sample.
    void check(const std::string& name, double tol, const std::vector<double>& samples,
               const std::function<double(double)>& gap) {
        IdentityCheck c{name, 0.0, tol, 0, false};
        for (double x : samples) {
            const double g = gap(x);
            // NaN counts as a failure.
            c.max_deviation = std::isnan(g) ? INFINITY : std::max(c.max_deviation, g);
            ++c.samples;
        }
        c.passed = c.max_deviation <= tol;
        report_.checks.push_back(std::move(c));
    }

    SuiteReport finish() {
        report_.passed = true;
        for (const auto& c : report_.checks) {
            report_.max_deviation = std::max(report_.max_deviation, c.max_deviation);
            report_.passed = report_.passed && c.passed;
        }
        return std::move(report_);
    }

private:
    SuiteReport report_;
};

// Sample range for the small family: inside half the series radius, at most 1.5.
double small_range(const PQBase& base) { return std::min(1.5, 0.5 * small_series_radius(base)); }

SuiteReport exp_reciprocal(const PQBase& base) {
    SuiteBuilder b("exp-reciprocal");
    b.check("e(z) E(-z) = 1", 1e-10, linspace(-2.0, 2.0, 50),
            [&](double z) { return std::abs(exp_small(base, z) * exp_big(base, -z) - 1.0); });
    b.check("e(iz) E(-iz) = 1", 1e-10, linspace(-2.0, 2.0, 50), [&](double z) {
        const Complex w(0.0, z);
        return std::abs(exp_small(base, w) * exp_big(base, -w) - 1.0);
    });
    return b.finish();
}

SuiteReport trig(const PQBase& base) {
    SuiteBuilder b("trig");
    const auto xs = linspace(-small_range(base), small_range(base), 31);
    auto T = [&](TrigKind k, double x) { return trig_eval(k, base, x); };
    using K = TrigKind;
    b.check("cos Cos + sin Sin = 1", 1e-10, xs, [&](double x) {
        return std::abs(T(K::CosSmall, x) * T(K::CosBig, x) + T(K::SinSmall, x) * T(K::SinBig, x) - 1.0);
    });
    b.check("sin Cos - cos Sin = 0", 1e-10, xs, [&](double x) {
        return std::abs(T(K::SinSmall, x) * T(K::CosBig, x) - T(K::CosSmall, x) * T(K::SinBig, x));
    });
    // Derivative ladder away from 0, where the stencil is the plain quotient.
    const auto ds = linspace(0.1, small_range(base) / base.p(), 15);
    auto D = [&](K k, double x) { return pq_derivative([&](double y) { return T(k, y); }, base, x); };
    const double p = base.p();
    const double q = base.q();
    b.check("D cos(z) = -sin(pz)", 1e-9, ds, [&](double x) { return scaled_gap(D(K::CosSmall, x), -T(K::SinSmall, p * x)); });
    b.check("D sin(z) = cos(pz)", 1e-9, ds, [&](double x) { return scaled_gap(D(K::SinSmall, x), T(K::CosSmall, p * x)); });
    b.check("D Cos(z) = -Sin(qz)", 1e-9, ds, [&](double x) { return scaled_gap(D(K::CosBig, x), -T(K::SinBig, q * x)); });
    b.check("D Sin(z) = Cos(qz)", 1e-9, ds, [&](double x) { return scaled_gap(D(K::SinBig, x), T(K::CosBig, q * x)); });
    return b.finish();
}

SuiteReport hyperbolic(const PQBase& base) {
    SuiteBuilder b("hyperbolic");
    const auto xs = linspace(-small_range(base), small_range(base), 31);
    auto T = [&](TrigKind k, double x) { return trig_eval(k, base, x); };
    using K = TrigKind;
    b.check("cosh Cosh - sinh Sinh = 1", 1e-10, xs, [&](double x) {
        return std::abs(T(K::CoshSmall, x) * T(K::CoshBig, x) - T(K::SinhSmall, x) * T(K::SinhBig, x) - 1.0);
    });
    b.check("cosh Sinh - sinh Cosh = 0", 1e-10, xs, [&](double x) {
        return std::abs(T(K::CoshSmall, x) * T(K::SinhBig, x) - T(K::SinhSmall, x) * T(K::CoshBig, x));
    });
    for (K k : {K::CoshSmall, K::SinhSmall, K::CoshBig, K::SinhBig}) {
        b.check(fmt::format("{} series = exponential combination", to_string(k)), 1e-10, xs,
                [&, k](double x) { return scaled_gap(T(k, x), hyperbolic_via_exp(k, base, x)); });
    }
    return b.finish();
}

SuiteReport gamma_recurrence(const PQBase& base, const GridConfig& grid) {
    SuiteBuilder b("gamma-recurrence");
    const std::vector<double> ns{1, 2, 3, 4, 5, 6};
    const double p = base.p();
    const double q = base.q();
    b.check("Gamma(n+1) = [n]! (integral)", 1e-7, ns, [&](double n) {
        return relative_gap(gamma_first_integral(base, n + 1, grid), pq_factorial(base, static_cast<int>(n)));
    });
    b.check("Gamma(n+1) = (p (-) q)^n / (p-q)^n", 1e-15, ns, [&](double n) {
        const int k = static_cast<int>(n);
        const double product = pq_power_finite(base, p, q, k, PowerSign::Minus) / std::pow(p - q, k);
        return relative_gap(product, pq_factorial(base, k));
    });
    b.check("gamma(n+1) = [n]!", 1e-7, ns, [&](double n) {
        return relative_gap(gamma_second(base, n + 1, grid), pq_factorial(base, static_cast<int>(n)));
    });
    const std::vector<double> zs{0.5, 1.5, 2.5};
    b.check("Gamma(z+1) = [z] Gamma(z)", 1e-6, zs, [&](double z) {
        return relative_gap(gamma_first(base, z + 1, grid), pq_number_real(base, z) * gamma_first(base, z, grid));
    });
    b.check("gamma(z+1) = [z] gamma(z)", 1e-6, zs, [&](double z) {
        return relative_gap(gamma_second(base, z + 1, grid), pq_number_real(base, z) * gamma_second(base, z, grid));
    });
    // The older prefactor p^{(n-1)(n-2)/2} is off by p^{n-1}.
    b.check("[n-1]! / uncorrected Gamma(n) = p^{n-1}", 1e-7, ns, [&](double n) {
        const double ratio = pq_factorial(base, static_cast<int>(n) - 1) / gamma_first_uncorrected(base, n, grid);
        return relative_gap(ratio, std::pow(p, n - 1));
    });
    return b.finish();
}

SuiteReport product_rules(const PQBase& base) {
    SuiteBuilder b("product-rules");
    const double p = base.p();
    const double q = base.q();
    auto f = [&](double x) { return exp_small(base, 0.5 * x); };
    auto g = [&](double x) { return trig_eval(TrigKind::CosBig, base, x) + 2.0; };
    auto D = [&](const std::function<double(double)>& h, double x) { return pq_derivative(h, base, x); };
    auto fg = [&](double x) { return f(x) * g(x); };
    auto f_over_g = [&](double x) { return f(x) / g(x); };
    const auto xs = linspace(0.1, 2.0, 20);
    b.check("D(fg) = f(px) Dg + g(qx) Df", 1e-12, xs, [&](double x) {
        return scaled_gap(D(fg, x), f(p * x) * D(g, x) + g(q * x) * D(f, x));
    });
    b.check("D(fg) = g(px) Df + f(qx) Dg", 1e-12, xs, [&](double x) {
        return scaled_gap(D(fg, x), g(p * x) * D(f, x) + f(q * x) * D(g, x));
    });
    b.check("D(f/g) = (g(qx) Df - f(qx) Dg) / (g(px) g(qx))", 1e-12, xs, [&](double x) {
        return scaled_gap(D(f_over_g, x), (g(q * x) * D(f, x) - f(q * x) * D(g, x)) / (g(p * x) * g(q * x)));
    });
    b.check("D(f/g) = (g(px) Df - f(px) Dg) / (g(px) g(qx))", 1e-12, xs, [&](double x) {
        return scaled_gap(D(f_over_g, x), (g(p * x) * D(f, x) - f(p * x) * D(g, x)) / (g(p * x) * g(q * x)));
    });
    return b.finish();
}

SuiteReport integration(const PQBase& base, const GridConfig& grid) {
    SuiteBuilder b("integration");
    const double p = base.p();
    const double q = base.q();
    auto f = [&](double x) { return exp_small(base, 0.5 * x); };
    auto g = [&](double x) { return trig_eval(TrigKind::SinBig, base, x); };
    auto D = [&](const std::function<double(double)>& h, double x) { return pq_derivative(h, base, x); };
    const auto uppers = linspace(0.5, 2.0, 7);
    b.check("int_a^b f(px) Dg = [fg]_a^b - int_a^b g(qx) Df", 1e-9, uppers, [&](double hi) {
        const double lo = 0.2;
        const double lhs = pq_integral_interval([&](double x) { return f(p * x) * D(g, x); }, base, lo, hi, grid).value;
        const double rhs = f(hi) * g(hi) - f(lo) * g(lo) -
                           pq_integral_interval([&](double x) { return g(q * x) * D(f, x); }, base, lo, hi, grid).value;
        return scaled_gap(lhs, rhs);
    });
    b.check("int_a^b Df = f(b) - f(a)", 1e-9, uppers, [&](double hi) {
        const double lo = 0.2;
        const double lhs = pq_integral_interval([&](double x) { return D(f, x); }, base, lo, hi, grid).value;
        return scaled_gap(lhs, f(hi) - f(lo));
    });
    // int f(alpha t) over the grid anchored at c equals (1/alpha) int f over
    // the grid anchored at alpha c; alpha = (p/q)^k maps the grid to itself.
    auto h = [&](double t) { return exp_small(base, -p * t); };
    b.check("int_0^inf f(alpha t) = (1/alpha) int_0^inf f", 1e-9, {0.5, 2.0, p / q, q / p}, [&](double alpha) {
        GridConfig scaled = grid;
        scaled.anchor = grid.anchor * alpha;
        const double lhs = pq_integral_improper([&](double t) { return h(alpha * t); }, base, grid).value;
        const double rhs = pq_integral_improper(h, base, scaled).value / alpha;
        return scaled_gap(lhs, rhs);
    });
    return b.finish();
}

SuiteReport binomial(const PQBase& base) {
    SuiteBuilder b("binomial");
    const double p = base.p();
    const std::vector<std::pair<double, double>> params{{1.0, 0.5}, {0.7, -0.4}, {-0.6, 0.9}, {1.2, 0.0}};
    // |a z / p| < 1 keeps the series inside its disc.
    const auto zs = linspace(-0.6 * p / 1.2, 0.6 * p / 1.2, 13);
    for (auto [a, bb] : params) {
        b.check(fmt::format("1phi0((({}),({})); z) = (p (-) {}z)^inf / (p (-) {}z)^inf", a, bb, bb, a), 1e-10, zs,
                [&, a = a, bb = bb](double z) {
                    const double series = hypergeom_phi(HypergeomSpec{{{a, bb}}, {}}, base, z);
                    return scaled_gap(series, binomial_product(base, a, bb, z));
                });
    }
    const std::vector<std::array<double, 3>> triples{{1.0, 0.5, -0.3}, {0.7, -0.4, 0.2}, {-0.6, 0.9, 1.1}};
    for (const auto& [a, bb, c] : triples) {
        b.check(fmt::format("1phi0(({},{})) 1phi0(({},{})) = 1phi0(({},{}))", a, bb, bb, c, a, c), 1e-10, zs,
                [&, a = a, bb = bb, c = c](double z) {
                    const double lhs = hypergeom_phi(HypergeomSpec{{{a, bb}}, {}}, base, z) *
                                       hypergeom_phi(HypergeomSpec{{{bb, c}}, {}}, base, z);
                    return scaled_gap(lhs, hypergeom_phi(HypergeomSpec{{{a, c}}, {}}, base, z));
                });
    }
    return b.finish();
}

SuiteReport transform_oracle(const PQBase& base, const GridConfig& grid) {
    SuiteBuilder b("transform-oracle");
    std::map<std::string, std::vector<OracleCase>> groups;
    for (auto& c : transform_oracle_cases(base)) {
        groups[fmt::format("{} kind, {}", to_string(c.kind), to_string(c.f))].push_back(c);
    }
    for (const auto& [name, cases] : groups) {
        std::vector<double> idx;
        for (std::size_t i = 0; i < cases.size(); ++i) idx.push_back(static_cast<double>(i));
        b.check(name, cases.front().tolerance, idx, [&](double i) {
            const auto& c = cases[static_cast<std::size_t>(i)];
            const double table = transform_table(c.f, base, c.kind)(c.s);
            return relative_gap(transform_numeric(c.f, base, c.s, c.kind, grid).value, table);
        });
    }
    return b.finish();
}

}  // namespace

std::vector<OracleCase> transform_oracle_cases(const PQBase& base) {
    base.require_full_grid("transform oracle");
    const double p = base.p();
    std::vector<OracleCase> out;
    auto add = [&](FunctionExpr f, TransformKind kind, double margin, double tol) {
        const double thr = validity_threshold(f.terms().front().atom, base, kind);
        for (double m : {1.5, 2.0}) {
            const double s = thr > 0.0 ? m * std::max(thr, margin) : (margin > 0.0 ? m * margin : m * 0.5);
            out.push_back({f, kind, s, tol});
        }
    };
    constexpr auto First = TransformKind::FirstKind;
    constexpr auto Second = TransformKind::SecondKind;
    for (auto kind : {First, Second}) {
        add(fn::Const{2.5}, kind, 0.0, 1e-7);
        for (int n = 1; n <= 6; ++n) add(fn::Monomial{n}, kind, 0.0, 1e-7);
        for (double alpha : {0.5, 1.5}) add(fn::Power{alpha}, kind, 0.0, 1e-6);
    }
    for (double a : {0.3, 0.5}) {
        const double margin = 2.0 * a / p;
        add(fn::ExpSmall{a}, First, margin, 1e-7);
        add(fn::Cos{a}, First, margin, 1e-7);
        add(fn::Sin{a}, First, margin, 1e-7);
        add(fn::Cosh{a}, First, margin, 1e-7);
        add(fn::Sinh{a}, First, margin, 1e-7);
        for (int n = 1; n <= 6; ++n) add(fn::MonomialTimesExpSmall{n, a}, First, margin, 1e-7);

        add(fn::ExpBig{a}, Second, 0.0, 1e-7);
        add(fn::BigCos{a}, Second, 0.0, 1e-7);
        add(fn::BigSin{a}, Second, 0.0, 1e-7);
        add(fn::BigCosh{a}, Second, 0.0, 1e-7);
        add(fn::BigSinh{a}, Second, 0.0, 1e-7);
        for (int n = 1; n <= 6; ++n) add(fn::MonomialTimesExpBig{n, a}, Second, 0.0, 1e-7);
    }
    return out;
}

const std::vector<std::string>& identity_suites() {
    static const std::vector<std::string> names{"exp-reciprocal", "trig",        "hyperbolic", "gamma-recurrence",
                                                "product-rules",  "integration", "binomial",   "transform-oracle"};
    return names;
}

SuiteReport run_identity_suite(const std::string& suite, const PQBase& base, const GridConfig& grid) {
    grid.validate();
    if (suite == "exp-reciprocal") return exp_reciprocal(base);
    if (suite == "trig") return trig(base);
    if (suite == "hyperbolic") return hyperbolic(base);
    if (suite == "gamma-recurrence") return gamma_recurrence(base, grid);
    if (suite == "product-rules") return product_rules(base);
    if (suite == "integration") {
        base.require_full_grid("integration suite");
        return integration(base, grid);
    }
    if (suite == "binomial") return binomial(base);
    if (suite == "transform-oracle") return transform_oracle(base, grid);
    throw DomainError(fmt::format("unknown identity suite '{}'", suite));
}

}  // namespace pqcalc
