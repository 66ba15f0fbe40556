#pragma once

#include <cmath>
#include <optional>

namespace concentric {

// Bracketed bisection for a root of func on [lo, hi].
//
// func(lo) and func(hi) must have opposite signs (or one of them be zero);
// otherwise std::nullopt is returned. Iteration stops when the bracket is
// narrower than rel_tol * max(|lo|, |hi|) or the midpoint stops moving in
// floating point. An exact zero at either end is returned as-is.
template <class F>
std::optional<double> bisect(F&& func, double lo, double hi, double rel_tol) {
    double f_lo = func(lo);
    double f_hi = func(hi);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if (std::signbit(f_lo) == std::signbit(f_hi) || std::isnan(f_lo) || std::isnan(f_hi)) {
        return std::nullopt;
    }
    for (int iter = 0; iter < 2000; ++iter) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        if (hi - lo <= rel_tol * std::fmax(std::fabs(lo), std::fabs(hi))) break;
        const double f_mid = func(mid);
        if (f_mid == 0.0) return mid;
        if (std::signbit(f_mid) == std::signbit(f_lo)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return lo + 0.5 * (hi - lo);
}

}  // namespace concentric
