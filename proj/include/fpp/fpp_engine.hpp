#pragma once

// Exact first-passage time and exact extremal-process extraction.
//
// A suffix table h[v] = min weight from v to the all-ones vertex is built in
// O(2^n n). h[0] is the first-passage time, and the same table gives an
// admissible lower bound for pruning a depth-first enumeration of all paths
// whose centered weight n (X - 1) stays below a threshold.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fpp/core_model.hpp"
#include "fpp/errors.hpp"

namespace fpp {

// Abort limit for extremal enumeration.
inline constexpr std::uint64_t kMaxExtremalPoints = 10'000'000;

struct SuffixMinTable {
    int n = 0;
    std::vector<double> h;  // 2^n entries indexed by vertex mask
    // The optimal path read off h, and its weight summed in traversal order
    // (the order path_weight uses). h[0] holds the same sum right to left.
    std::vector<std::uint8_t> argmin;
    double m = 0.0;

    double first_passage_time() const { return m; }
};

struct ExtremalPoint {
    PathPerm path;
    double centered = 0.0;  // n (X_pi - 1)
};

struct ExtremalSample {
    HypercubeInstance instance;
    double a = 0.0;
    std::vector<ExtremalPoint> points;  // ascending by centered
};

namespace engine_detail {

inline void check_table_dimension(int n) {
    if (n < 1 || n > kMaxTableDimension) {
        throw CapacityError("dimension " + std::to_string(n) + " exceeds the exact-engine limit of " +
                            std::to_string(kMaxTableDimension));
    }
}

// Pruning slack: h is summed in a different order than a path prefix, so the
// bound is relaxed by a few ulps and membership is decided on the exact sum.
inline constexpr double kPruneSlack = 1e-9;

template <EdgeWeightSource W>
void fill_suffix_min(const W& field, std::vector<double>& h) {
    const int n = field.dimension();
    const std::uint32_t full = full_mask(n);
    h.assign(std::size_t{1} << n, 0.0);
    h[full] = 0.0;
    if constexpr (requires(typename W::VertexWords vw) {
                      field.load_vertex(0u, vw);
                      field.vertex_uniform(vw, 0u, 0);
                  }) {
        // Since -ln(1-U) >= U + U^2/2, candidates are ranked by that cheap
        // bound first and the log is taken only where the bound can still win.
        typename W::VertexWords vw;
        double bound[32];
        double unif[32];
        int dirs[32];
        for (std::uint32_t v = full; v-- > 0;) {
            field.load_vertex(v, vw);
            std::uint32_t free = ~v & full;
            int m = 0;
            int arg = 0;
            double bound_min = std::numeric_limits<double>::infinity();
            while (free != 0) {
                const int j = __builtin_ctz(free);
                free &= free - 1;
                const double u = field.vertex_uniform(vw, v, j);
                const double b = u + 0.5 * u * u + h[v | (std::uint32_t{1} << j)];
                unif[m] = u;
                bound[m] = b;
                dirs[m] = j;
                if (b < bound_min) {
                    bound_min = b;
                    arg = m;
                }
                ++m;
            }
            double best = W::weight_from_uniform(unif[arg]) + h[v | (std::uint32_t{1} << dirs[arg])];
            for (int i = 0; i < m; ++i) {
                if (i == arg || bound[i] >= best) continue;
                const double cand = W::weight_from_uniform(unif[i]) + h[v | (std::uint32_t{1} << dirs[i])];
                if (cand < best) best = cand;
            }
            h[v] = best;
        }
    } else {
        for (std::uint32_t v = full; v-- > 0;) {
            double best = std::numeric_limits<double>::infinity();
            std::uint32_t free = ~v & full;
            while (free != 0) {
                const int j = __builtin_ctz(free);
                free &= free - 1;
                const double cand = field.weight_unchecked(v, j) + h[v | (std::uint32_t{1} << j)];
                if (cand < best) best = cand;
            }
            h[v] = best;
        }
    }
}

template <EdgeWeightSource W>
void read_optimum(const W& field, SuffixMinTable& t) {
    const int n = field.dimension();
    const std::uint32_t full = full_mask(n);
    t.argmin.clear();
    t.m = 0.0;
    for (std::uint32_t v = 0; v != full;) {
        double best = std::numeric_limits<double>::infinity();
        double best_w = 0.0;
        int best_j = -1;
        for (std::uint32_t free = ~v & full; free != 0; free &= free - 1) {
            const int j = __builtin_ctz(free);
            const double w = field.weight_unchecked(v, j);
            const double cand = w + t.h[v | (std::uint32_t{1} << j)];
            if (cand < best) {
                best = cand;
                best_w = w;
                best_j = j;
            }
        }
        t.argmin.push_back(static_cast<std::uint8_t>(best_j));
        t.m += best_w;
        v |= std::uint32_t{1} << best_j;
    }
}

// Depth-first walk over all paths with n (X - 1) <= a; calls emit(order, X).
template <EdgeWeightSource W, class Emit>
void walk_extremal(const W& field, const SuffixMinTable& table, double a, Emit&& emit) {
    const int n = field.dimension();
    const std::uint32_t full = full_mask(n);
    const double budget = 1.0 + a / n + kPruneSlack;
    if (table.h[0] > budget) return;

    struct Frame {
        std::uint32_t mask;
        double prefix;
        int next_dir;
    };
    std::vector<Frame> stack;
    std::vector<std::uint8_t> order;
    stack.reserve(static_cast<std::size_t>(n) + 1);
    order.reserve(static_cast<std::size_t>(n));
    stack.push_back({0u, 0.0, 0});

    while (!stack.empty()) {
        Frame& top = stack.back();
        if (top.mask == full) {
            const double x = top.prefix;
            if (n * (x - 1.0) <= a) emit(order, x);
            stack.pop_back();
            if (!order.empty()) order.pop_back();
            continue;
        }
        bool descended = false;
        while (top.next_dir < n) {
            const int j = top.next_dir++;
            const std::uint32_t bit = std::uint32_t{1} << j;
            if (top.mask & bit) continue;
            const double w = field.weight_unchecked(top.mask, j);
            const double prefix = top.prefix + w;
            if (prefix + table.h[top.mask | bit] > budget) continue;
            order.push_back(static_cast<std::uint8_t>(j));
            const Frame child{top.mask | bit, prefix, 0};
            stack.push_back(child);
            descended = true;
            break;
        }
        if (!descended) {
            stack.pop_back();
            if (!order.empty()) order.pop_back();
        }
    }
}

}  // namespace engine_detail

template <EdgeWeightSource W>
SuffixMinTable build_suffix_min(const W& field) {
    engine_detail::check_table_dimension(field.dimension());
    SuffixMinTable t;
    t.n = field.dimension();
    engine_detail::fill_suffix_min(field, t.h);
    engine_detail::read_optimum(field, t);
    return t;
}

// Rebuilds into an existing table so a worker can reuse one allocation.
template <EdgeWeightSource W>
void build_suffix_min(const W& field, SuffixMinTable& table) {
    engine_detail::check_table_dimension(field.dimension());
    table.n = field.dimension();
    engine_detail::fill_suffix_min(field, table.h);
    engine_detail::read_optimum(field, table);
}

// m_n = min over all n! paths of X_pi.
template <EdgeWeightSource W>
double first_passage_time(const W& field) {
    return build_suffix_min(field).first_passage_time();
}

template <EdgeWeightSource W>
std::uint64_t count_extremal(const W& field, const SuffixMinTable& table, double a) {
    std::uint64_t count = 0;
    engine_detail::walk_extremal(field, table, a, [&](const std::vector<std::uint8_t>&, double) {
        if (++count > kMaxExtremalPoints) {
            throw CapacityError("threshold too loose: more than 10^7 extremal points");
        }
    });
    return count;
}

template <EdgeWeightSource W>
std::uint64_t count_extremal(const W& field, double a) {
    return count_extremal(field, build_suffix_min(field), a);
}

template <EdgeWeightSource W>
std::vector<ExtremalPoint> extremal_points(const W& field, const SuffixMinTable& table, double a) {
    const int n = field.dimension();
    std::vector<ExtremalPoint> points;
    engine_detail::walk_extremal(field, table, a, [&](const std::vector<std::uint8_t>& order, double x) {
        if (points.size() >= kMaxExtremalPoints) {
            throw CapacityError("threshold too loose: more than 10^7 extremal points");
        }
        points.push_back({PathPerm(order), n * (x - 1.0)});
    });
    std::stable_sort(points.begin(), points.end(),
                     [](const ExtremalPoint& l, const ExtremalPoint& r) { return l.centered < r.centered; });
    return points;
}

// All paths with n (X_pi - 1) <= a, sorted ascending by centered weight.
inline ExtremalSample extremal_paths(const WeightField& field, double a) {
    return {field.instance(), a, extremal_points(field, build_suffix_min(field), a)};
}

}  // namespace fpp
