#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "pqcalc/base.hpp"

namespace pqcalc {

enum class TransformKind {
    FirstKind,   // kernel E_{p,q}(-qst)
    SecondKind,  // kernel e_{p,q}(-pst)
};

std::string to_string(TransformKind kind);

/// (s - c p^pe q^qe). The raw c is kept so that table parameters can be
/// read back bit-for-bit.
struct LinearFactor {
    double c = 0.0;
    int pe = 0;
    int qe = 0;

    double shift(const PQBase& base) const;
};

/// p^p_exp q^q_exp [factorial]! / (s^s_power * prod factors).
/// s_power may be negative (polynomial terms of the derivative rule).
struct RationalTerm {
    int p_exp = 0;
    int q_exp = 0;
    int factorial = 0;
    int s_power = 0;
    std::vector<LinearFactor> factors;
};

/// p^p_exp q^q_exp N / ((p^base_p q^base_q s)^2 + sigma a^2), N = s or a.
struct QuadraticTerm {
    bool s_numerator = true;
    int p_exp = 0;
    int q_exp = 0;
    int base_p = 0;
    int base_q = 0;
    double a = 0.0;
    int sigma = 1;  // +1 trigonometric, -1 hyperbolic
};

/// gamma_value / (w^{alpha(alpha+1)/2} s^{alpha+1}), w = p (first kind) or q (second).
struct PowerLawTerm {
    double alpha = 0.0;
    double gamma_value = 1.0;
};

/// (1/s) sum_n (q/p)^{C(n,2)} (a/(ps))^n: first-kind transform of E_{p,q}(at).
struct SeriesRuleTerm {
    double a = 0.0;

    /// c_n in sum c_n s^{-n-1}.
    double coefficient(const PQBase& base, int n) const;
};

class TransformExpr;

/// (1/dilation) inner(s/dilation).
struct ScaledTerm {
    std::shared_ptr<const TransformExpr> inner;
    double dilation = 1.0;
};

using TransformShape =
    std::variant<RationalTerm, QuadraticTerm, PowerLawTerm, SeriesRuleTerm, ScaledTerm>;

struct TransformTerm {
    double weight = 1.0;
    TransformShape shape;
};

/// A weighted sum of closed-form transform shapes, valid for s > s_min.
class TransformExpr {
public:
    TransformExpr(PQBase base, TransformKind kind) : base_(base), kind_(kind) {}

    const PQBase& base() const { return base_; }
    TransformKind kind() const { return kind_; }
    const std::vector<TransformTerm>& terms() const { return terms_; }
    double s_min() const { return s_min_; }

    /// Appends a term (rational terms are canonicalized) and widens s_min.
    void add(double weight, TransformShape shape, double s_min = 0.0);
    void append(const TransformExpr& other);

    /// Throws DomainError unless s > s_min.
    double operator()(double s) const { return evaluate(s); }
    double evaluate(double s) const;

    /// Same base, kind and term list; integers compared exactly, real
    /// coefficients and factor shifts to 1e-13 relative.
    bool structurally_equal(const TransformExpr& other) const;

private:
    PQBase base_;
    TransformKind kind_;
    std::vector<TransformTerm> terms_;
    double s_min_ = 0.0;
};

/// Folds zero shifts into s_power, drops [0]!/[1]!, orders factors by
/// descending shift.
RationalTerm canonical(RationalTerm term, const PQBase& base);

/// Scalar p^p_exp q^q_exp [factorial]! of a rational term.
double rational_coefficient(const RationalTerm& term, const PQBase& base);

double shape_value(const TransformShape& shape, const PQBase& base, TransformKind kind, double s);

/// Exact algebra on purely rational expressions (UnsupportedError otherwise).
/// s -> p^i q^j s.
TransformExpr substitute_scale(const TransformExpr& f, int i, int j);
/// Multiplies by weight * p^pe q^qe s^s_pow.
TransformExpr multiply_monomial(const TransformExpr& f, double weight, int pe, int qe, int s_pow);
/// Multiplies every rational term by 1/(s - factor).
TransformExpr divide_by_factor(const TransformExpr& f, LinearFactor factor);

/// n-fold (p,q)-derivative in s of terms c [m-1]!/s^m, using
/// d_s s^{-m} = -[m] (pq)^{-m} s^{-m-1}.
TransformExpr symbolic_q_derivative(const TransformExpr& f, int n);

std::string to_string(const TransformExpr& f);

}  // namespace pqcalc
