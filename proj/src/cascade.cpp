#include "fpp/cascade.hpp"

#include <cmath>

#include "fpp/errors.hpp"
#include "fpp/gamma_tails.hpp"
#include "fpp/parallel.hpp"

namespace fpp {
namespace {

// Positions are tracked as multiplicative weights w = e^{-eta}: a unit-rate
// gap multiplies w by a uniform, and the cutoff eta <= s becomes w >= e^{-s}.
struct Node {
    Rng rng;
    int depth;
    double w;
};

template <class OnNode, class OnLeaf>
void walk_cascade(const CascadeParams& p, const Rng& root, OnNode&& on_node, OnLeaf&& on_leaf) {
    const double floor_w = std::exp(-p.s_max);
    std::vector<Node> stack;
    stack.push_back({root, 0, 1.0});
    while (!stack.empty()) {
        Node node = stack.back();
        stack.pop_back();
        on_node(node.depth);
        double cw = node.w;
        if (node.depth == p.r - 1) {
            for (;;) {
                cw *= node.rng.uniform_open();
                if (cw < floor_w) break;
                on_leaf(cw);
            }
        } else {
            for (std::uint64_t i = 0;; ++i) {
                cw *= node.rng.uniform_open();
                if (cw < floor_w) break;
                stack.push_back({node.rng.child(i), node.depth + 1, cw});
            }
        }
    }
}

void check_params(const CascadeParams& p) {
    if (p.r < 0) throw DomainError("cascade depth must be >= 0");
    if (!(p.s_max > 0.0)) throw DomainError("cascade cutoff must be positive");
}

}  // namespace

PppStream sample_ppp(double cutoff, Rng& rng) {
    if (!(cutoff > 0.0)) throw DomainError("sample_ppp: cutoff must be positive");
    PppStream s;
    s.cutoff = cutoff;
    double eta = 0.0;
    for (;;) {
        eta += rng.exponential();
        if (eta > cutoff) break;
        s.points.push_back(eta);
    }
    return s;
}

double truncated_mass(const CascadeParams& params) {
    check_params(params);
    if (params.r == 0) return 0.0;
    return regularized_gamma_q(params.r, params.s_max);
}

double sample_cascade(const CascadeParams& params, Rng rng) {
    check_params(params);
    if (params.r == 0) return 1.0;
    double z = 0.0;
    std::uint64_t expanded = 0;
    walk_cascade(params, rng, [&](int) { ++expanded; }, [&](double w) { z += w; });
    if (params.compensate) z += static_cast<double>(expanded) * std::exp(-params.s_max);
    return z;
}

std::vector<double> sample_cascades(const CascadeParams& params, std::size_t count, const Rng& rng,
                                    int workers) {
    check_params(params);
    std::vector<double> out(count);
    parallel_for(count, workers, [&](std::size_t i) { out[i] = sample_cascade(params, rng.child(i)); });
    return out;
}

std::vector<std::uint64_t> cascade_node_counts(const CascadeParams& params, Rng rng) {
    check_params(params);
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(params.r) + 1, 0);
    if (params.r == 0) {
        counts[0] = 1;
        return counts;
    }
    walk_cascade(
        params, rng, [&](int depth) { ++counts[static_cast<std::size_t>(depth)]; },
        [&](double) { ++counts[static_cast<std::size_t>(params.r)]; });
    return counts;
}

namespace {

// Applies T to a and (optionally) b with identical points and indices.
void apply_T_coupled(const EmpiricalDist& a, const EmpiricalDist* b, std::size_t n_out, const Rng& rng,
                     double s_max, std::vector<double>& out_a, std::vector<double>& out_b) {
    if (!(s_max > 0.0)) throw DomainError("apply_T: cutoff must be positive");
    const double floor_w = std::exp(-s_max);
    out_a.assign(n_out, 0.0);
    if (b != nullptr) out_b.assign(n_out, 0.0);
    for (std::size_t j = 0; j < n_out; ++j) {
        Rng rj = rng.child(j);
        double w = 1.0;
        double sa = 0.0;
        double sb = 0.0;
        for (;;) {
            w *= rj.uniform_open();
            if (w < floor_w) break;
            const auto idx = static_cast<std::size_t>(rj.below(a.size()));
            sa += w * a[idx];
            if (b != nullptr) sb += w * (*b)[idx];
        }
        out_a[j] = sa;
        if (b != nullptr) out_b[j] = sb;
    }
}

}  // namespace

EmpiricalDist apply_T(const EmpiricalDist& input, std::size_t n_out, const Rng& rng, double s_max) {
    if (n_out == 0) throw ContractViolation("apply_T: N_out must be >= 1");
    std::vector<double> a;
    std::vector<double> unused;
    apply_T_coupled(input, nullptr, n_out, rng, s_max, a, unused);
    return EmpiricalDist(std::move(a));
}

double w2_distance(const EmpiricalDist& a, const EmpiricalDist& b) {
    if (a.size() != b.size()) {
        throw ContractViolation("w2_distance: sample sizes differ (" + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
    }
    long double acc = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const long double d = static_cast<long double>(a[i]) - b[i];
        acc += d * d;
    }
    return std::sqrt(static_cast<double>(acc / static_cast<long double>(a.size())));
}

std::vector<double> contraction_trace(const EmpiricalDist& mu0, const EmpiricalDist& nu0, int k,
                                      std::size_t n, const Rng& rng, double s_max) {
    if (k < 0 || n == 0) throw ContractViolation("contraction_trace: need k >= 0 and N >= 1");
    for (const EmpiricalDist* d : {&mu0, &nu0}) {
        if (std::fabs(d->mean() - 1.0) > 1e-2) {
            throw ContractViolation("contraction_trace: start law not in P_{2,1} (mean " +
                                    std::to_string(d->mean()) + ")");
        }
    }
    EmpiricalDist mu = resample_quantiles(mu0, n);
    EmpiricalDist nu = resample_quantiles(nu0, n);
    std::vector<double> trace{w2_distance(mu, nu)};
    std::vector<double> a;
    std::vector<double> b;
    for (int j = 1; j <= k; ++j) {
        // Both laws are sorted, so a shared bootstrap index pairs equal quantiles.
        apply_T_coupled(mu, &nu, n, rng.child(static_cast<std::uint64_t>(j)), s_max, a, b);
        mu = EmpiricalDist(std::move(a));
        nu = EmpiricalDist(std::move(b));
        trace.push_back(w2_distance(mu, nu));
    }
    return trace;
}

std::vector<double> cascade_laplace(const CascadeParams& params, const std::vector<double>& t_grid,
                                    std::size_t n, const Rng& rng, int workers) {
    for (const double t : t_grid) {
        if (!(t >= 0.0)) throw DomainError("cascade_laplace: t must be >= 0");
    }
    if (n == 0) throw ContractViolation("cascade_laplace: N must be >= 1");
    const std::vector<double> z = sample_cascades(params, n, rng, workers);
    std::vector<double> out;
    out.reserve(t_grid.size());
    for (const double t : t_grid) {
        double acc = 0.0;
        for (const double v : z) acc += std::exp(-t * v);
        out.push_back(acc / static_cast<double>(n));
    }
    return out;
}

double sample_Z(Rng& rng) {
    const double e1 = rng.exponential();
    const double e2 = rng.exponential();
    return e1 * e2;
}

}  // namespace fpp
