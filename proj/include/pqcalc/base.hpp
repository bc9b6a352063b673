#pragma once

#include <string_view>

namespace pqcalc {

enum class Regime {
    SeriesOnly,  // any p != q; only power-series operators are meaningful
    FullGrid,    // 0 < q < p, p >= 1: geometric grids contract into [0, a]
};

/// The deformation parameters (p, q).
///
/// The regime is derived from the values: FullGrid whenever 0 < q < p and
/// p >= 1, SeriesOnly otherwise. Grid operators (integrals, transforms,
/// Gamma) call `require_full_grid` and reject SeriesOnly bases.
class PQBase {
public:
    /// Throws DomainError if p == q or either value is not finite or zero.
    PQBase(double p, double q);

    double p() const noexcept { return p_; }
    double q() const noexcept { return q_; }
    /// q/p; lies in (0, 1) in the FullGrid regime.
    double ratio() const noexcept { return q_ / p_; }
    Regime regime() const noexcept { return regime_; }

    /// The base with p and q exchanged (always SeriesOnly when this one is FullGrid).
    PQBase swapped() const { return PQBase(q_, p_); }

    /// Throws DomainError naming `operation` unless the regime is FullGrid.
    void require_full_grid(std::string_view operation) const;

    friend bool operator==(const PQBase&, const PQBase&) = default;

private:
    double p_;
    double q_;
    Regime regime_;
};

/// Truncation policy for power series and infinite products.
struct SeriesTruncation {
    int max_terms = 4000;
    double abs_tol = 0.0;
    double rel_tol = 1e-17;
    /// Number of consecutive below-tolerance terms required to stop.
    int consecutive_small = 2;

    /// Throws DomainError when the invariants (max_terms >= 1, some positive
    /// tolerance, consecutive_small >= 1) are violated.
    void validate() const;
};

}  // namespace pqcalc
