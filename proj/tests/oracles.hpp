#pragma once

// Independent reference computations used only by the tests.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "fpp/core_model.hpp"

namespace oracle {

inline std::vector<fpp::PathPerm> all_paths(int n) {
    std::vector<std::uint8_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), std::uint8_t{0});
    std::vector<fpp::PathPerm> out;
    do {
        out.emplace_back(order);
    } while (std::next_permutation(order.begin(), order.end()));
    return out;
}

// Walks the vertex sequence and sums edge weights left to right.
inline double naive_path_weight(const fpp::WeightField& f, const std::vector<std::uint8_t>& order) {
    std::uint32_t v = 0;
    double s = 0.0;
    for (const auto d : order) {
        s += f.weight({v, d});
        v |= 1u << d;
    }
    return s;
}

inline double naive_path_weight(const fpp::WeightField& f, const fpp::PathPerm& p) {
    return naive_path_weight(f, std::vector<std::uint8_t>(p.order().begin(), p.order().end()));
}

// Edge sets compared as (tail, dir) pairs.
inline int naive_shared_edges(const fpp::PathPerm& p, const fpp::PathPerm& q) {
    const auto ep = p.edges();
    const auto eq = q.edges();
    int s = 0;
    for (const auto& a : ep) {
        for (const auto& b : eq) {
            if (a.tail == b.tail && a.dir == b.dir) ++s;
        }
    }
    return s;
}

// E_1(x) by its continued fraction (modified Lentz), x > 0.
inline double expint_e1(double x) {
    const double tiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        const double del = c * d;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x);
}

// Composite Simpson on [a, b] with n (even) panels.
template <class F>
double simpson(F&& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

}  // namespace oracle
