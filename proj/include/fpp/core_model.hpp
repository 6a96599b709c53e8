#pragma once

// Hypercube geometry and the random environment.
//
// Vertices of {0,1}^n are n-bit masks. The directed edge (v, v + e_j) is
// identified by its tail mask v (bit j clear) and direction j, and carries
// the frozen edge code  tail * n + dir. Changing that layout changes every
// simulated number for a given seed.

#include <cmath>
#include <concepts>
#include <cstdint>
#include <span>
#include <vector>

#include "fpp/errors.hpp"
#include "fpp/rng.hpp"

namespace fpp {

// Engines that tabulate all 2^n vertices refuse larger dimensions.
inline constexpr int kMaxTableDimension = 28;

struct HypercubeInstance {
    int n = 1;
    std::uint64_t seed = 0;
    std::uint64_t replica = 0;
};

struct EdgeRef {
    std::uint32_t tail = 0;
    int dir = 0;
};

inline constexpr std::uint32_t full_mask(int n) {
    return n >= 32 ? 0xFFFFFFFFu : ((std::uint32_t{1} << n) - 1u);
}

inline constexpr std::uint64_t edge_code(int n, EdgeRef e) {
    return std::uint64_t{e.tail} * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(e.dir);
}

inline constexpr std::uint64_t edge_count(int n) {
    return static_cast<std::uint64_t>(n) << (n - 1);
}

bool is_valid_edge(int n, EdgeRef e);

// A directed 0 -> 1 path, stored as the order in which coordinates are flipped.
class PathPerm {
public:
    PathPerm() = default;
    explicit PathPerm(std::vector<std::uint8_t> order);

    static PathPerm identity(int n);

    int dimension() const { return static_cast<int>(order_.size()); }
    std::span<const std::uint8_t> order() const { return order_; }
    std::uint8_t operator[](std::size_t i) const { return order_[i]; }

    // The i-th traversed edge, i = 0..n-1.
    EdgeRef edge(int i) const;
    std::vector<EdgeRef> edges() const;

    friend bool operator==(const PathPerm&, const PathPerm&) = default;
    friend auto operator<=>(const PathPerm&, const PathPerm&) = default;

private:
    std::vector<std::uint8_t> order_;
};

// The environment (xi_e): i.i.d. Exp(1) weights given lazily by a keyed PRF.
class WeightField {
public:
    explicit WeightField(HypercubeInstance inst);

    const HypercubeInstance& instance() const { return inst_; }
    int dimension() const { return inst_.n; }

    // The PRF uniform U in (0, 1) behind an edge; weight = -ln(1 - U).
    double uniform(EdgeRef e) const;
    double weight(EdgeRef e) const;

    // No validation; hot loops only.
    double uniform_unchecked(std::uint32_t tail, int dir) const {
        const std::uint64_t code = std::uint64_t{tail} * n_ + static_cast<std::uint64_t>(dir);
        const auto words = philox_u64x2(code >> 1, inst_.replica, key_);
        const double u = u64_to_unit(words[code & 1u]);
        return u != 0.0 ? u : retry_uniform(code);
    }
    double weight_unchecked(std::uint32_t tail, int dir) const {
        return weight_from_uniform(uniform_unchecked(tail, dir));
    }

    static double weight_from_uniform(double u) { return -std::log1p(-u); }

    // Raw PRF words for all n directions out of one vertex, generated as one
    // run of consecutive counters: words[offset + j] belongs to edge (tail, j).
    struct VertexWords {
        alignas(64) std::uint64_t words[32];
        int offset = 0;
    };
    void load_vertex(std::uint32_t tail, VertexWords& out) const {
        const std::uint64_t c0 = std::uint64_t{tail} * n_;
        philox_u64x2_run16(c0 >> 1, inst_.replica, key_, out.words);
        out.offset = static_cast<int>(c0 & 1u);
    }
    double vertex_uniform(const VertexWords& vw, std::uint32_t tail, int dir) const {
        const double u = u64_to_unit(vw.words[vw.offset + dir]);
        return u != 0.0 ? u : retry_uniform(std::uint64_t{tail} * n_ + static_cast<std::uint64_t>(dir));
    }

private:
    double retry_uniform(std::uint64_t code) const;

    HypercubeInstance inst_;
    std::uint64_t n_;
    PhiloxKey key_;
};

// Anything the exact engines can read weights from.
template <class W>
concept EdgeWeightSource = requires(const W& w, std::uint32_t tail, int dir) {
    { w.dimension() } -> std::convertible_to<int>;
    { w.weight_unchecked(tail, dir) } -> std::convertible_to<double>;
};

// Weight of a single edge; throws ContractViolation for an invalid edge.
double edge_weight(const WeightField& field, EdgeRef e);

// X_pi, the sum of the n edge weights along p.
template <EdgeWeightSource W>
double path_weight(const W& field, const PathPerm& p) {
    if (p.dimension() != field.dimension()) {
        throw ContractViolation("path_weight: path dimension does not match the field");
    }
    double sum = 0.0;
    std::uint32_t mask = 0;
    for (const std::uint8_t dir : p.order()) {
        sum += field.weight_unchecked(mask, dir);
        mask |= std::uint32_t{1} << dir;
    }
    return sum;
}

// Number of edges common to both paths.
int shared_edges(const PathPerm& p, const PathPerm& q);

// Steps r .. n-r-1 (0-based) form the middle region: their edges are the
// ones not fixed by conditioning on the weights within r steps of either end.
inline constexpr bool is_middle_step(int n, int r, int step) { return step >= r && step < n - r; }

// Edges common to both paths at middle-region steps.
int shared_middle_edges(const PathPerm& p, const PathPerm& q, int r);

}  // namespace fpp
