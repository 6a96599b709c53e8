#pragma once

// Adaptive 15-point Gauss-Kronrod quadrature (Boost.Math panels) with
// optional interior breakpoints.

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace fpp {

struct QuadratureSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double tail_cut = 45.0;  // e^{-x} tails beyond this are bounded analytically
    unsigned max_depth = 30;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
};

template <class F>
QuadResult integrate(F&& f, double lo, double hi, const QuadratureSpec& spec = {}) {
    if (!(hi > lo)) return {};
    // Boost 1.74 compares the panel error measured on [-1, 1] with a tolerance
    // scaled to the panel width, so panels much narrower than 1 never
    // terminate. Integrating g over [-1, 1] keeps the two on the same scale.
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    auto g = [&](double t) { return half * f(mid + half * t); };
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    double err = 0.0;
    double l1 = 0.0;
    // Boost stops on err <= tol * L1; pick tol so that either tolerance is met.
    const double v = GK::integrate(g, -1.0, 1.0, spec.max_depth, spec.rel_tol, &err, &l1);
    if (err > spec.abs_tol && err > spec.rel_tol * l1) {
        const double tol = std::max(spec.abs_tol / std::max(l1, 1e-300), 1e-15);
        const double v2 = GK::integrate(g, -1.0, 1.0, spec.max_depth + 10, tol, &err, &l1);
        return {v2, err};
    }
    return {v, err};
}

// Integrates over [lo, hi] split at the given points (those outside are ignored).
template <class F>
QuadResult integrate_split(F&& f, double lo, double hi, std::vector<double> breaks,
                           const QuadratureSpec& spec = {}) {
    breaks.erase(std::remove_if(breaks.begin(), breaks.end(),
                                [&](double b) { return !(b > lo && b < hi); }),
                 breaks.end());
    std::sort(breaks.begin(), breaks.end());
    QuadResult total;
    double left = lo;
    breaks.push_back(hi);
    for (const double b : breaks) {
        const QuadResult part = integrate(f, left, b, spec);
        total.value += part.value;
        total.error += part.error;
        left = b;
    }
    return total;
}

}  // namespace fpp
