#pragma once

// Poisson approximation of Xi_n((-inf, a]) conditionally on the weights of the
// edges within r steps of either end of the cube.
//
// Given those outer weights, a path is determined by its boundary pair (the
// first r and last r directions) plus an ordering of the m = n - 2r middle
// directions, and its middle weight is Gamma(m, 1). Two paths are dependent
// only through shared middle edges.

#include <cstdint>
#include <vector>

#include "fpp/core_model.hpp"
#include "fpp/rng.hpp"

namespace fpp {

inline constexpr std::uint64_t kMaxBoundaryPairs = 100'000'000;
inline constexpr int kMaxBoundDimension = 10;

struct BoundaryPair {
    std::vector<std::uint8_t> prefix;  // first r directions
    std::vector<std::uint8_t> suffix;  // last r directions
    double weight = 0.0;               // X_{x,y}: sum of the 2r outer edge weights
};

struct OuterConditioning {
    int n = 0;
    int r = 0;
    std::vector<BoundaryPair> pairs;  // all of V_{r,n}
};

// Number of boundary pairs n! / (n - 2r)!.
std::uint64_t boundary_pair_count(int n, int r);

OuterConditioning outer_conditioning(const WeightField& field, int r);

// lambda_{r,n}(a) = sum over V_{r,n} of (n-2r)! P(Gamma_{n-2r} <= 1 + a/n - X_{x,y}).
double conditional_lambda(const WeightField& field, int r, double a);

// E[I_pi I_pi' | F] for two paths with m middle edges, k of them shared, and
// remaining budgets c, c': int gamma_k(s) P(Gamma_{m-k} <= c - s) P(Gamma_{m-k} <= c' - s) ds.
double joint_inclusion(int m, int k, double c, double c_prime);

struct CsReport {
    double lambda = 0.0;
    double term1 = 0.0;
    double term2 = 0.0;
    double term3 = 0.0;
    double bound = 0.0;
    double tv = 0.0;
    double tv_se = 0.0;
    std::uint64_t active_pairs = 0;  // boundary pairs with positive remaining budget
};

// Fills lambda and the three bound terms. n <= 10.
CsReport cs_bound(const WeightField& field, int r, double a);

// Weights of `outer` on non-middle steps and of `inner` on middle steps.
struct MiddleResampledField {
    const WeightField* outer;
    WeightField inner;
    int r;

    int dimension() const { return outer->dimension(); }
    double weight_unchecked(std::uint32_t tail, int dir) const {
        const int step = __builtin_popcount(tail);
        return is_middle_step(outer->dimension(), r, step) ? inner.weight_unchecked(tail, dir)
                                                           : outer->weight_unchecked(tail, dir);
    }
};

// Environment j of the middle-resampling family attached to `field`.
MiddleResampledField resample_middle(const WeightField& field, int r, std::uint64_t j);

struct TvEstimate {
    double tv = 0.0;
    double se = 0.0;
};

// 1/2 sum_k |p_k - q_k| for an empirical pmf against Poisson(lambda); the
// Poisson mass beyond the largest observed value is added as is.
double poisson_tv(const std::vector<std::uint64_t>& histogram, double lambda);

// Empirical conditional law of Xi_n((-inf, a]) over `inner` middle
// environments, compared with Poisson(conditional_lambda). Bootstrap standard error.
TvEstimate conditional_tv(const WeightField& field, int r, double a, std::uint64_t inner,
                          int bootstrap = 200);

// Subset of the nonnegative integers: finitely many members plus an optional
// half-line {tail_from, tail_from + 1, ...}.
struct IntSet {
    std::vector<int> members;
    int tail_from = -1;

    static IntSet all() { return {{}, 0}; }
    static IntSet upto(int m);
    static IntSet of(std::vector<int> values);
    bool contains(int k) const;
};

double poisson_set_probability(double lambda, const IntSet& a);

// Solution g of f(k) = lambda g(k+1) - k g(k), g(0) = 0, with f = 1_A - P(Poisson(lambda) in A).
struct SteinSolution {
    double lambda = 0.0;
    IntSet set;
    double p_set = 0.0;

    double f(int k) const;
    // Forward partial sum; accurate for k <= lambda.
    double forward(int k) const;
    // Tail sum; accurate for k > lambda.
    double tail(int k) const;
    // Picks the stable representation.
    double operator()(int k) const;
};

SteinSolution stein_g(double lambda, const IntSet& a);

// max over k in [lo, hi] of |g(k+1) - g(k)|.
double stein_sup_delta(double lambda, const IntSet& a, int lo, int hi);

}  // namespace fpp
