#pragma once

#include <stdexcept>
#include <string>

namespace pqcalc {

/// Root of every error the library raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Arguments outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Result would not be representable (argument caps, overflow).
class RangeError : public Error {
public:
    using Error::Error;
};

/// A denominator factor vanished; `index` names the offending factor.
class SingularityError : public DomainError {
public:
    SingularityError(const std::string& what, int index)
        : DomainError(what), index_(index) {}
    int index() const noexcept { return index_; }

private:
    int index_;
};

/// Pole of the product continuation of e_{p,q}.
class PoleError : public SingularityError {
public:
    using SingularityError::SingularityError;
};

/// Malformed textual input (function expressions, CLI values).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Function/transform/problem shape outside what the table or solver covers.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// No table entry matches a transform-domain expression.
class NotInvertibleError : public UnsupportedError {
public:
    NotInvertibleError(const std::string& what, std::string residual)
        : UnsupportedError(what), residual_(std::move(residual)) {}
    const std::string& residual() const noexcept { return residual_; }

private:
    std::string residual_;
};

/// Numerical non-convergence. Carries the partial result so callers can
/// report how far the summation got.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double partial, int terms, double last_term,
                     std::string where)
        : Error(what), partial_(partial), terms_(terms), last_term_(last_term),
          where_(std::move(where)) {}

    double partial() const noexcept { return partial_; }
    int terms() const noexcept { return terms_; }
    double last_term() const noexcept { return last_term_; }
    /// Which part of the sum failed ("series", "left tail", "right tail", ...).
    const std::string& where() const noexcept { return where_; }

private:
    double partial_;
    int terms_;
    double last_term_;
    std::string where_;
};

/// Window or term budget exhausted before the tail became small.
class TruncationError : public ConvergenceError {
public:
    using ConvergenceError::ConvergenceError;
};

/// Terms grow instead of shrinking.
class DivergenceError : public ConvergenceError {
public:
    using ConvergenceError::ConvergenceError;
};

}  // namespace pqcalc
