#include "fpp/core_model.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace fpp {
namespace {

// Separates the environment's key space from the sampler streams in Rng.
constexpr std::uint64_t kEnvironmentDomain = 0x5F0E3D2C1B0A9988ull;

}  // namespace

bool is_valid_edge(int n, EdgeRef e) {
    if (n < 1 || n > 32 || e.dir < 0 || e.dir >= n) return false;
    if ((e.tail & ~full_mask(n)) != 0) return false;
    return ((e.tail >> e.dir) & 1u) == 0;
}

PathPerm::PathPerm(std::vector<std::uint8_t> order) : order_(std::move(order)) {
    const std::size_t n = order_.size();
    if (n == 0 || n > 32) {
        throw ContractViolation("PathPerm: dimension must be in [1, 32]");
    }
    std::uint64_t seen = 0;
    for (const std::uint8_t d : order_) {
        if (d >= n || ((seen >> d) & 1u)) {
            throw ContractViolation("PathPerm: order is not a permutation of 0..n-1");
        }
        seen |= std::uint64_t{1} << d;
    }
}

PathPerm PathPerm::identity(int n) {
    std::vector<std::uint8_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), std::uint8_t{0});
    return PathPerm(std::move(order));
}

EdgeRef PathPerm::edge(int i) const {
    std::uint32_t tail = 0;
    for (int k = 0; k < i; ++k) tail |= std::uint32_t{1} << order_[static_cast<std::size_t>(k)];
    return {tail, order_[static_cast<std::size_t>(i)]};
}

std::vector<EdgeRef> PathPerm::edges() const {
    std::vector<EdgeRef> out;
    out.reserve(order_.size());
    std::uint32_t tail = 0;
    for (const std::uint8_t d : order_) {
        out.push_back({tail, d});
        tail |= std::uint32_t{1} << d;
    }
    return out;
}

WeightField::WeightField(HypercubeInstance inst)
    : inst_(inst),
      n_(static_cast<std::uint64_t>(inst.n)),
      key_(PhiloxKey::from_u64(mix64(inst.seed ^ kEnvironmentDomain))) {
    if (inst.n < 1 || inst.n > 31) {
        throw ContractViolation("WeightField: dimension must be in [1, 31]");
    }
}

double WeightField::retry_uniform(std::uint64_t code) const {
    // U = 0 would give a zero weight; re-key with a tweak until nonzero.
    for (std::uint64_t tweak = 1;; ++tweak) {
        const PhiloxKey k = PhiloxKey::from_u64(mix64(inst_.seed ^ kEnvironmentDomain ^ mix64(tweak)));
        const auto words = philox_u64x2(code >> 1, inst_.replica, k);
        const double u = u64_to_unit(words[code & 1u]);
        if (u != 0.0) return u;
    }
}

double WeightField::uniform(EdgeRef e) const {
    if (!is_valid_edge(inst_.n, e)) {
        throw ContractViolation("invalid edge: tail " + std::to_string(e.tail) + ", dir " +
                                std::to_string(e.dir) + " for n = " + std::to_string(inst_.n));
    }
    return uniform_unchecked(e.tail, e.dir);
}

double WeightField::weight(EdgeRef e) const { return weight_from_uniform(uniform(e)); }

double edge_weight(const WeightField& field, EdgeRef e) { return field.weight(e); }

int shared_edges(const PathPerm& p, const PathPerm& q) {
    if (p.dimension() != q.dimension()) {
        throw ContractViolation("shared_edges: paths have different dimensions");
    }
    // Edge i of a path has a tail with popcount i, so only same-step edges can coincide.
    int shared = 0;
    std::uint32_t tp = 0;
    std::uint32_t tq = 0;
    for (int i = 0; i < p.dimension(); ++i) {
        const auto dp = p[static_cast<std::size_t>(i)];
        const auto dq = q[static_cast<std::size_t>(i)];
        if (dp == dq && tp == tq) ++shared;
        tp |= std::uint32_t{1} << dp;
        tq |= std::uint32_t{1} << dq;
    }
    return shared;
}

int shared_middle_edges(const PathPerm& p, const PathPerm& q, int r) {
    if (p.dimension() != q.dimension()) {
        throw ContractViolation("shared_middle_edges: paths have different dimensions");
    }
    const int n = p.dimension();
    int shared = 0;
    std::uint32_t tp = 0;
    std::uint32_t tq = 0;
    for (int i = 0; i < n; ++i) {
        const auto dp = p[static_cast<std::size_t>(i)];
        const auto dq = q[static_cast<std::size_t>(i)];
        if (dp == dq && tp == tq && is_middle_step(n, r, i)) ++shared;
        tp |= std::uint32_t{1} << dp;
        tq |= std::uint32_t{1} << dq;
    }
    return shared;
}

}  // namespace fpp
