#pragma once

#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "pqcalc/base.hpp"
#include "pqcalc/summation.hpp"

namespace pqcalc {

/// Closed-form function families known to the transform table.
/// Each `a` is the dilation in f(at).
namespace fn {
struct Const { double c = 1.0; bool operator==(const Const&) const = default; };
struct Monomial { int n = 0; bool operator==(const Monomial&) const = default; };
struct Power { double alpha = 0.0; bool operator==(const Power&) const = default; };  // alpha > -1
struct ExpSmall { double a = 0.0; bool operator==(const ExpSmall&) const = default; };
struct ExpBig { double a = 0.0; bool operator==(const ExpBig&) const = default; };
struct Cos { double a = 0.0; bool operator==(const Cos&) const = default; };
struct Sin { double a = 0.0; bool operator==(const Sin&) const = default; };
struct BigCos { double a = 0.0; bool operator==(const BigCos&) const = default; };
struct BigSin { double a = 0.0; bool operator==(const BigSin&) const = default; };
struct Cosh { double a = 0.0; bool operator==(const Cosh&) const = default; };
struct Sinh { double a = 0.0; bool operator==(const Sinh&) const = default; };
struct BigCosh { double a = 0.0; bool operator==(const BigCosh&) const = default; };
struct BigSinh { double a = 0.0; bool operator==(const BigSinh&) const = default; };
struct MonomialTimesExpSmall {
    int n = 0;
    double a = 0.0;
    bool operator==(const MonomialTimesExpSmall&) const = default;
};
struct MonomialTimesExpBig {
    int n = 0;
    double a = 0.0;
    bool operator==(const MonomialTimesExpBig&) const = default;
};
}  // namespace fn

using Atom = std::variant<fn::Const, fn::Monomial, fn::Power, fn::ExpSmall, fn::ExpBig, fn::Cos,
                          fn::Sin, fn::BigCos, fn::BigSin, fn::Cosh, fn::Sinh, fn::BigCosh,
                          fn::BigSinh, fn::MonomialTimesExpSmall, fn::MonomialTimesExpBig>;

struct SumEntry {
    double coeff = 1.0;
    Atom atom;
    bool operator==(const SumEntry&) const = default;
};

/// A single family member, or a flat weighted sum of them.
class FunctionExpr {
public:
    FunctionExpr() : node_(Atom{fn::Const{0.0}}) {}
    FunctionExpr(Atom atom);  // NOLINT: implicit on purpose
    template <typename T, typename = std::enable_if_t<std::is_constructible_v<Atom, T> &&
                                                      !std::is_same_v<std::decay_t<T>, Atom>>>
    FunctionExpr(T member) : FunctionExpr(Atom(std::move(member))) {}  // NOLINT
    /// Throws DomainError on invalid members (e.g. Power with alpha <= -1).
    static FunctionExpr sum(std::vector<SumEntry> entries);

    bool is_sum() const { return std::holds_alternative<std::vector<SumEntry>>(node_); }
    const Atom& atom() const;
    const std::vector<SumEntry>& entries() const;
    /// The expression as weighted atoms; an atom is {(1, atom)}.
    std::vector<SumEntry> terms() const;

    bool operator==(const FunctionExpr&) const = default;

private:
    std::variant<Atom, std::vector<SumEntry>> node_;
};

/// Throws DomainError when the atom violates its invariants.
void validate(const Atom& atom);

double evaluate(const FunctionExpr& f, const PQBase& base, double t);
double evaluate(const Atom& atom, const PQBase& base, double t);
/// Sign/log-magnitude of f(t), reaching arguments where the big family
/// overflows double.
LogValue evaluate_log(const FunctionExpr& f, const PQBase& base, double t);

/// Taylor coefficient of t^k at 0 (DomainError where it does not exist).
double series_coefficient(const FunctionExpr& f, const PQBase& base, int k);
/// (D^k_{p,q} f)(0) = [k]! * (coefficient of t^k).
double initial_derivative(const FunctionExpr& f, const PQBase& base, int k);

/// g(t) = f(alpha t) as a FunctionExpr.
FunctionExpr dilate(const FunctionExpr& f, double alpha);

/// Canonical form: Monomial(0), ExpSmall(0), ... become Const(1), and
/// t^n * exp(0 t) becomes Monomial(n).
Atom canonical(const Atom& atom);

std::string to_string(const FunctionExpr& f);
std::string to_string(const Atom& atom);

/// Parses the notation written by to_string, e.g. "t^3", "1 + 5*t",
/// "e(0.5t)", "t^2*e(0.5t)", "cos(0.3t)", "t^(1.5)", "-2*Sinh(t)".
/// Throws ParseError.
FunctionExpr parse_function(const std::string& text);

}  // namespace pqcalc
