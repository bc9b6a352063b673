#pragma once

#include <cmath>
#include <complex>

namespace pqcalc {

/// Neumaier's variant of Kahan summation. Order-dependent but deterministic:
/// the same sequence of additions always yields the same bits.
template <typename T>
class CompensatedSum {
public:
    void add(T x) noexcept {
        if constexpr (std::is_floating_point_v<T>) {
            step(sum_, comp_, x);
        } else {
            using R = typename T::value_type;
            R s = sum_.real(), c = comp_.real();
            step(s, c, x.real());
            R si = sum_.imag(), ci = comp_.imag();
            step(si, ci, x.imag());
            sum_ = T(s, si);
            comp_ = T(c, ci);
        }
    }

    T value() const noexcept { return sum_ + comp_; }

private:
    template <typename R>
    static void step(R& sum, R& comp, R x) noexcept {
        const R t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }

    T sum_{};
    T comp_{};
};

/// Sign and natural log of |x|; sign == 0 encodes an exact zero.
struct LogValue {
    int sign = 0;
    double log_abs = -INFINITY;

    static LogValue from(double x) {
        if (x == 0.0) return {};
        return {x > 0 ? 1 : -1, std::log(std::abs(x))};
    }
    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
};

inline LogValue operator*(LogValue a, LogValue b) {
    if (a.sign == 0 || b.sign == 0) return {};
    return {a.sign * b.sign, a.log_abs + b.log_abs};
}

}  // namespace pqcalc
