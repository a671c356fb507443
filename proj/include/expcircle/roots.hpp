#pragma once

#include <cmath>

#include "expcircle/errors.hpp"

namespace expcircle::roots {

inline constexpr int kMaxIterations = 80;
inline constexpr double kResidualTolerance = 1e-12;

/// Solves f(y) = target for y in [lo, hi], where f is strictly increasing with
/// f(lo) <= target <= f(hi). Newton steps from `guess`, falling back to
/// bisection whenever a step leaves the current bracket.
template <class F, class DF>
double solve_increasing(const F& f, const DF& df, double target, double lo, double hi, double guess) {
    double y = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
    double best_y = y;
    double best_res = INFINITY;
    const double stop = 1e-15 * std::max(1.0, std::abs(target));
    for (int it = 0; it < kMaxIterations; ++it) {
        double r = f(y) - target;
        if (std::abs(r) < best_res) {
            best_res = std::abs(r);
            best_y = y;
        }
        if (std::abs(r) <= stop) return y;
        if (r < 0.0) lo = y;
        else hi = y;
        double slope = df(y);
        double next = y - r / slope;
        if (!(next > lo && next < hi) || !(slope > 0.0)) next = 0.5 * (lo + hi);
        if (next == y) break;
        y = next;
        if (hi - lo <= 0.0) break;
    }
    if (best_res <= kResidualTolerance) return best_y;
    throw RootFindingFailure("monotone root solve did not reach the residual tolerance");
}

}  // namespace expcircle::roots
