#include "pqcalc/cli.hpp"

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "pqcalc/calculus.hpp"
#include "pqcalc/errors.hpp"
#include "pqcalc/function_expr.hpp"
#include "pqcalc/identities.hpp"
#include "pqcalc/laplace.hpp"
#include "pqcalc/solver.hpp"
#include "pqcalc/special.hpp"

namespace pqcalc {

using json = nlohmann::json;

namespace {

enum class Format { Text, Json, Csv };

struct Globals {
    double p = 0.0;
    double q = 0.0;
    std::optional<int> max_terms;
    std::optional<double> tol;
    std::optional<int> jmin;
    std::optional<int> jmax;
    bool as_json = false;
    bool as_csv = false;
    bool as_text = false;

    Format format() const { return as_json ? Format::Json : as_csv ? Format::Csv : Format::Text; }

    SeriesTruncation truncation() const {
        SeriesTruncation t;
        if (max_terms) t.max_terms = *max_terms;
        if (tol) t.rel_tol = *tol;
        t.validate();
        return t;
    }
    GridConfig grid() const {
        GridConfig g;
        if (tol) g.abs_tol = *tol;
        if (jmin) g.j_min = *jmin;
        if (jmax) g.j_max = *jmax;
        g.validate();
        return g;
    }
    void record(json& inputs) const {
        inputs["p"] = p;
        inputs["q"] = q;
        if (max_terms) inputs["max-terms"] = *max_terms;
        if (tol) inputs["tol"] = *tol;
        if (jmin) inputs["jmin"] = *jmin;
        if (jmax) inputs["jmax"] = *jmax;
    }
};

// Everything a subcommand may set.
struct Args {
    std::string fn;
    double z = 0.0;
    int n = 0;
    double x = 0.0;
    std::optional<double> upper;
    bool improper = false;
    double s = 0.0;
    std::string kind = "first";
    std::string mode = "numeric";
    std::string suite;
    std::string problem;
    std::vector<std::string> params;
    double s_from = 0.0;
    double s_to = 0.0;
    int steps = 0;
};

TransformKind parse_kind(const std::string& k) {
    if (k == "first") return TransformKind::FirstKind;
    if (k == "second") return TransformKind::SecondKind;
    throw DomainError(fmt::format("--kind must be first or second (got '{}')", k));
}

json diagnostics(int terms, double tail, EvalPath path) {
    return json{{"terms_used", terms}, {"tail_estimate", tail}, {"path", std::string(to_string(path))}};
}

json diagnostics(const QuadratureResult& r) { return diagnostics(r.terms_used, r.tail_estimate, EvalPath::Grid); }

std::string num(double v) { return fmt::format("{:.17g}", v); }

void render_text(const json& v, std::ostream& out, const std::string& indent) {
    if (v.is_object()) {
        for (const auto& [k, item] : v.items()) {
            if (item.is_structured()) {
                out << indent << k << ":\n";
                render_text(item, out, indent + "  ");
            } else {
                out << indent << k << ": ";
                render_text(item, out, "");
            }
        }
    } else if (v.is_array()) {
        for (const auto& item : v) {
            if (item.is_structured()) {
                out << indent << "-\n";
                render_text(item, out, indent + "  ");
            } else {
                out << indent << "- ";
                render_text(item, out, "");
            }
        }
    } else if (v.is_number_float()) {
        out << indent << num(v.get<double>()) << "\n";
    } else if (v.is_string()) {
        out << indent << v.get<std::string>() << "\n";
    } else {
        out << indent << v.dump() << "\n";
    }
}

void emit(const json& record, Format format, std::ostream& out) {
    if (format == Format::Json) {
        out << record.dump() << "\n";
        return;
    }
    if (format == Format::Csv) {
        out << "key,value\n";
        auto row = [&](const std::string& k, const json& v) {
            out << k << "," << (v.is_number_float() ? num(v.get<double>()) : v.is_string() ? v.get<std::string>() : v.dump())
                << "\n";
        };
        if (record["value"].is_object()) {
            for (const auto& [k, v] : record["value"].items()) {
                if (!v.is_structured()) row(k, v);
            }
        } else if (!record["value"].is_structured()) {
            row("value", record["value"]);
        }
        if (record.contains("diagnostics")) {
            for (const auto& [k, v] : record["diagnostics"].items()) row(k, v);
        }
        return;
    }
    if (record["value"].is_structured()) {
        render_text(record["value"], out, "");
    } else {
        out << "value: ";
        render_text(record["value"], out, "");
    }
    if (record.contains("diagnostics")) render_text(record["diagnostics"], out, "");
}

std::map<std::string, double> parse_params(const std::vector<std::string>& params) {
    std::map<std::string, double> out;
    for (const auto& item : params) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ParseError(fmt::format("--params expects key=value (got '{}')", item));
        const std::string key = item.substr(0, eq);
        try {
            std::size_t used = 0;
            const double v = std::stod(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
            out[key] = v;
        } catch (const std::logic_error&) {
            throw ParseError(fmt::format("--params: '{}' is not a number", item.substr(eq + 1)));
        }
    }
    return out;
}

double param(const std::map<std::string, double>& m, const std::string& key, std::optional<double> fallback) {
    if (auto it = m.find(key); it != m.end()) return it->second;
    if (fallback) return *fallback;
    throw DomainError(fmt::format("--params needs {}=<value>", key));
}

json report_json(const ResidualReport& r) {
    return json{{"max_abs_residual", r.max_abs_residual},
                {"points", r.sample_points},
                {"per_point", r.per_point},
                {"initial_value_error", r.initial_value_error},
                {"initial_derivative_error", r.initial_derivative_error},
                {"passed", r.passed}};
}

json suite_json(const SuiteReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks) {
        checks.push_back({{"name", c.name},
                          {"max_deviation", c.max_deviation},
                          {"tolerance", c.tolerance},
                          {"samples", c.samples},
                          {"passed", c.passed}});
    }
    return json{{"suite", r.suite}, {"passed", r.passed}, {"max_deviation", r.max_deviation}, {"checks", checks}};
}

json table_rows(TransformKind kind) {
    const bool first = kind == TransformKind::FirstKind;
    const std::string w = first ? "p" : "q";
    const std::string gamma = first ? "Gamma" : "gamma";
    std::vector<std::array<std::string, 3>> rows{
        {"1", "1/s", "s > 0"},
        {"t^n", fmt::format("[n]! / ({}^C(n+1,2) s^(n+1))", w), "s > 0"},
        {"t^alpha", fmt::format("{}(alpha+1) / ({}^(alpha(alpha+1)/2) s^(alpha+1))", gamma, w), "s > 0"},
    };
    if (first) {
        rows.push_back({"e(at)", "p/(ps - a)", "s > a/p"});
        rows.push_back({"E(at)", "(1/s) sum_n (q/p)^C(n,2) (a/(ps))^n  [series rule, not inverted]", "s > 0"});
        rows.push_back({"cos(at)", "p^2 s/((ps)^2 + a^2)", "s > |a|/p"});
        rows.push_back({"sin(at)", "p a/((ps)^2 + a^2)", "s > |a|/p"});
        rows.push_back({"cosh(at)", "p^2 s/((ps)^2 - a^2)", "s > |a|/p"});
        rows.push_back({"sinh(at)", "p a/((ps)^2 - a^2)", "s > |a|/p"});
        rows.push_back({"t^n e(at)", "p^(n+1-C(n+2,2)) [n]! / prod_{k=0..n} (s - a q^(n-k)/p^(n+1-k))", "s > a/p"});
        rows.push_back({"Cos, Sin, Cosh, Sinh, t^n E(at)", "no table entry", "-"});
    } else {
        rows.push_back({"E(at)", "q/(qs - a)", "s > |a|/q"});
        rows.push_back({"Cos(at)", "q^2 s/((qs)^2 + a^2)", "s > |a|/q"});
        rows.push_back({"Sin(at)", "q a/((qs)^2 + a^2)", "s > |a|/q"});
        rows.push_back({"Cosh(at)", "q^2 s/((qs)^2 - a^2)", "s > |a|/q"});
        rows.push_back({"Sinh(at)", "q a/((qs)^2 - a^2)", "s > |a|/q"});
        rows.push_back({"t^n E(at)", "q^(n+1-C(n+2,2)) [n]! / prod_{k=0..n} (s - a p^(n-k)/q^(n+1-k))",
                        "s > |a| p^n/q^(n+1)"});
        rows.push_back({"e(at), cos, sin, cosh, sinh, t^n e(at)", "no table entry (formal series diverges)", "-"});
    }
    json out = json::array();
    for (const auto& [f, F, v] : rows) out.push_back({{"function", f}, {"transform", F}, {"validity", v}});
    return out;
}

int run_sweep(const Globals& g, const Args& a, const PQBase& base, std::ostream& out) {
    if (a.steps < 1) throw DomainError("--steps must be >= 1");
    if (!(a.s_from > 0.0) || !(a.s_to >= a.s_from)) throw DomainError("sweep needs 0 < s-from <= s-to");
    const FunctionExpr f = parse_function(a.fn);
    const TransformKind kind = parse_kind(a.kind);
    const GridConfig grid = g.grid();
    json rows = json::array();
    if (g.format() != Format::Json) out << "s,value,terms_used,tail_estimate\n";
    for (int i = 0; i <= a.steps; ++i) {
        const double s = a.steps == 0 ? a.s_from : a.s_from + (a.s_to - a.s_from) * i / a.steps;
        const QuadratureResult r = transform_numeric(f, base, s, kind, grid);
        if (g.format() == Format::Json) {
            rows.push_back({{"s", s}, {"value", r.value}, {"terms_used", r.terms_used}, {"tail_estimate", r.tail_estimate}});
        } else {
            out << num(s) << "," << num(r.value) << "," << r.terms_used << "," << num(r.tail_estimate) << "\n";
        }
    }
    if (g.format() == Format::Json) {
        json inputs;
        g.record(inputs);
        inputs["fn"] = a.fn;
        inputs["kind"] = a.kind;
        inputs["s-from"] = a.s_from;
        inputs["s-to"] = a.s_to;
        inputs["steps"] = a.steps;
        out << json{{"command", "sweep"}, {"inputs", inputs}, {"value", rows}}.dump() << "\n";
    }
    return 0;
}

int dispatch(const std::string& cmd, const Globals& g, const Args& a, std::ostream& out) {
    const PQBase base(g.p, g.q);
    if (cmd == "sweep") return run_sweep(g, a, base, out);

    json record;
    record["command"] = cmd;
    json inputs;
    g.record(inputs);
    int code = 0;

    if (cmd == "eval") {
        inputs["fn"] = a.fn;
        inputs["z"] = a.z;
        const SeriesTruncation trunc = g.truncation();
        static const std::map<std::string, TrigKind> trig{
            {"cos", TrigKind::CosSmall},   {"sin", TrigKind::SinSmall},   {"Cos", TrigKind::CosBig},
            {"Sin", TrigKind::SinBig},     {"cosh", TrigKind::CoshSmall}, {"sinh", TrigKind::SinhSmall},
            {"Cosh", TrigKind::CoshBig},   {"Sinh", TrigKind::SinhBig}};
        Evaluation<double> ev;
        if (a.fn == "e") {
            ev = exp_small_eval(base, a.z, trunc);
        } else if (a.fn == "E") {
            ev = exp_big_eval(base, a.z, trunc);
        } else if (auto it = trig.find(a.fn); it != trig.end()) {
            ev = trig_eval_full(it->second, base, a.z, trunc);
        } else {
            throw DomainError(fmt::format("eval: unknown function '{}' (e, E, cos, sin, Cos, Sin, cosh, sinh, Cosh, Sinh)", a.fn));
        }
        record["value"] = ev.value;
        record["diagnostics"] = diagnostics(ev.terms_used, ev.tail_estimate, ev.path);
    } else if (cmd == "derivative") {
        inputs["fn"] = a.fn;
        inputs["n"] = a.n;
        inputs["x"] = a.x;
        if (a.n < 0) throw DomainError("--n must be >= 0");
        const FunctionExpr f = parse_function(a.fn);
        if (a.x == 0.0) {
            record["value"] = initial_derivative(f, base, a.n);
            record["diagnostics"] = diagnostics(a.n + 1, 0.0, EvalPath::Series);
        } else if (a.n == 0) {
            record["value"] = evaluate(f, base, a.x);
        } else {
            record["value"] = pq_derivative_iterated([&](double t) { return evaluate(f, base, t); }, base, a.n, a.x);
        }
    } else if (cmd == "integrate") {
        inputs["fn"] = a.fn;
        const FunctionExpr f = parse_function(a.fn);
        const GridConfig grid = g.grid();
        QuadratureResult r;
        if (a.improper == a.upper.has_value()) throw DomainError("integrate needs exactly one of --upper or --improper");
        if (a.improper) {
            inputs["improper"] = true;
            r = pq_integral_improper_log([&](double t) { return evaluate_log(f, base, t); }, base, grid);
        } else {
            inputs["upper"] = *a.upper;
            if (!(*a.upper >= 0.0)) throw DomainError("--upper must be >= 0");
            r = pq_integral_finite([&](double t) { return evaluate(f, base, t); }, base, *a.upper, grid);
        }
        record["value"] = r.value;
        record["diagnostics"] = diagnostics(r);
    } else if (cmd == "transform") {
        inputs["fn"] = a.fn;
        inputs["s"] = a.s;
        inputs["kind"] = a.kind;
        inputs["mode"] = a.mode;
        const FunctionExpr f = parse_function(a.fn);
        const TransformKind kind = parse_kind(a.kind);
        if (a.mode != "numeric" && a.mode != "table" && a.mode != "both") {
            throw DomainError(fmt::format("--mode must be numeric, table or both (got '{}')", a.mode));
        }
        std::optional<QuadratureResult> numeric;
        std::optional<double> table;
        if (a.mode != "table") numeric = transform_numeric(f, base, a.s, kind, g.grid());
        if (a.mode != "numeric") {
            const TransformExpr F = transform_table(f, base, kind);
            table = F(a.s);
            record["closed_form"] = to_string(F);
        }
        if (a.mode == "both") {
            record["value"] = {{"numeric", numeric->value},
                               {"table", *table},
                               {"gap", std::abs(numeric->value - *table) / std::abs(*table)}};
        } else {
            record["value"] = numeric ? numeric->value : *table;
        }
        if (numeric) record["diagnostics"] = diagnostics(*numeric);
    } else if (cmd == "gamma") {
        inputs["kind"] = a.kind;
        inputs["z"] = a.z;
        const TransformKind kind = parse_kind(a.kind);
        record["value"] = kind == TransformKind::FirstKind ? gamma_first(base, a.z, g.grid(), g.truncation())
                                                            : gamma_second(base, a.z, g.grid(), g.truncation());
    } else if (cmd == "identity-check") {
        inputs["suite"] = a.suite;
        std::vector<std::string> names;
        if (a.suite == "all") names = identity_suites();
        else names.push_back(a.suite);
        json suites = json::array();
        bool passed = true;
        double worst = 0.0;
        for (const auto& name : names) {
            const SuiteReport r = run_identity_suite(name, base, g.grid());
            passed = passed && r.passed;
            worst = std::max(worst, r.max_deviation);
            suites.push_back(suite_json(r));
        }
        record["value"] = names.size() == 1 ? suites.front()
                                            : json{{"passed", passed}, {"max_deviation", worst}, {"suites", suites}};
        code = passed ? 0 : 2;
    } else if (cmd == "solve") {
        inputs["problem"] = a.problem;
        inputs["params"] = a.params;
        const auto params = parse_params(a.params);
        json value;
        PQCauchyProblem problem;
        FunctionExpr solution;
        if (a.problem == "first-order" || a.problem == "resonant") {
            problem = a.problem == "first-order"
                          ? first_order_problem(param(params, "c", std::nullopt), param(params, "f0", 1.0))
                          : resonant_problem(param(params, "lambda", std::nullopt), base, param(params, "h0", 0.0));
            const FirstOrderSolution sol = solve_first_order_detailed(problem, base);
            value["transform"] = to_string(sol.transform);
            solution = sol.solution;
        } else if (a.problem == "oscillator") {
            const double omega = param(params, "omega", std::nullopt);
            const double A = param(params, "A", 0.0);
            const double B = param(params, "B", 1.0);
            problem = oscillator_problem(omega, A, B);
            solution = solve_oscillator(omega, A, B, base);
        } else {
            throw DomainError(fmt::format("--problem must be first-order, resonant or oscillator (got '{}')", a.problem));
        }
        value["solution"] = to_string(solution);
        try {
            value["residual"] = report_json(verify_solution(problem, solution, base, {0.1, 0.25, 0.5, 1.0}));
        } catch (const DomainError& e) {
            value["residual"] = json{{"skipped", e.what()}};
        }
        record["value"] = value;
    } else if (cmd == "table") {
        inputs["kind"] = a.kind;
        record["value"] = table_rows(parse_kind(a.kind));
    }
    record["inputs"] = inputs;
    if (cmd == "table" && g.format() == Format::Text) {
        for (const auto& row : record["value"]) {
            out << fmt::format("{:<40} {:<72} {}\n", row["function"].get<std::string>(),
                               row["transform"].get<std::string>(), row["validity"].get<std::string>());
        }
    } else {
        emit(record, g.format(), out);
    }
    return code;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"(p,q)-calculus: special functions, integrals, Laplace transforms, solvers", "pqcalc"};
    app.require_subcommand(1);
    Globals g;
    Args a;
    app.add_option("--p", g.p, "deformation parameter p")->required();
    app.add_option("--q", g.q, "deformation parameter q")->required();
    app.add_option("--max-terms", g.max_terms, "series/product term budget");
    app.add_option("--tol", g.tol, "stopping tolerance for series and grid sums");
    app.add_option("--jmin", g.jmin, "lowest improper-grid index");
    app.add_option("--jmax", g.jmax, "highest grid index");
    auto* fj = app.add_flag("--json", g.as_json, "JSON record");
    auto* fc = app.add_flag("--csv", g.as_csv, "CSV");
    auto* ft = app.add_flag("--text", g.as_text, "plain text (default)");
    fj->excludes(fc)->excludes(ft);
    fc->excludes(ft);

    auto sub = [&](const char* name, const char* help) { return app.add_subcommand(name, help)->fallthrough(); };

    auto* eval = sub("eval", "evaluate e, E, cos, sin, Cos, Sin, cosh, sinh, Cosh or Sinh");
    eval->add_option("fn", a.fn)->required();
    eval->add_option("--z", a.z)->required();

    auto* deriv = sub("derivative", "n-fold (p,q)-derivative of a function expression");
    deriv->add_option("--fn", a.fn)->required();
    deriv->add_option("--n", a.n)->required();
    deriv->add_option("--x", a.x)->required();

    auto* integ = sub("integrate", "(p,q)-integral over [0, upper] or [0, inf)");
    integ->add_option("--fn", a.fn)->required();
    integ->add_option("--upper", a.upper);
    integ->add_flag("--improper", a.improper);

    auto* trans = sub("transform", "(p,q)-Laplace transform, numeric and/or closed form");
    trans->add_option("--fn", a.fn)->required();
    trans->add_option("--s", a.s)->required();
    trans->add_option("--kind", a.kind);
    trans->add_option("--mode", a.mode);

    auto* gam = sub("gamma", "Gamma (first) or gamma (second) function");
    gam->add_option("--kind", a.kind)->required();
    gam->add_option("--z", a.z)->required();

    auto* ident = sub("identity-check", "run an identity suite (or 'all')");
    ident->add_option("--suite", a.suite)->required();

    auto* solve = sub("solve", "solve a first-order, resonant or oscillator Cauchy problem");
    solve->add_option("--problem", a.problem)->required();
    solve->add_option("--params", a.params, "key=value pairs (c, f0 | lambda, h0 | omega, A, B)");

    auto* table = sub("table", "closed-form transform table");
    table->add_option("--kind", a.kind)->required();

    auto* sweep = sub("sweep", "numeric transform over an s-grid (CSV)");
    sweep->add_option("--fn", a.fn)->required();
    sweep->add_option("--s-from", a.s_from)->required();
    sweep->add_option("--s-to", a.s_to)->required();
    sweep->add_option("--steps", a.steps)->required();
    sweep->add_option("--kind", a.kind);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        return dispatch(cmd, g, a, out);
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << "\n"
            << fmt::format("diagnostics: where={} terms={} partial={:.17g} last_term={:.17g}\n", e.where(), e.terms(),
                           e.partial(), e.last_term());
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

CommandOutput run_command(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_command(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> replay_args(const std::string& json_record) {
    const json record = json::parse(json_record);
    const std::string cmd = record.at("command").get<std::string>();
    std::vector<std::string> args{cmd};
    json inputs = record.at("inputs");
    if (cmd == "eval") {
        args.push_back(inputs.at("fn").get<std::string>());
        inputs.erase("fn");
    }
    for (const auto& [key, v] : inputs.items()) {
        if (v.is_boolean()) {
            if (v.get<bool>()) args.push_back("--" + key);
        } else if (v.is_array()) {
            if (v.empty()) continue;
            args.push_back("--" + key);
            for (const auto& item : v) args.push_back(item.get<std::string>());
        } else {
            args.push_back("--" + key);
            args.push_back(v.is_string() ? v.get<std::string>() : v.dump());
        }
    }
    args.push_back("--json");
    return args;
}

}  // namespace pqcalc
