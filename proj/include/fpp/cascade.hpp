#pragma once

// Derrida-Ruelle cascades, the smoothing map T and its l2 contraction.
//
// Z_r = sum over depth-r nodes of exp(-cumulative PPP position). Every node
// draws its Poisson points from its own stream, keyed by the parent's stream
// and the child's rank, so runs with different cutoffs share all points
// below the smaller cutoff.

#include <cstdint>
#include <vector>

#include "fpp/rng.hpp"
#include "fpp/stats.hpp"

namespace fpp {

struct PppStream {
    double cutoff = 0.0;
    std::vector<double> points;  // ascending, all <= cutoff
};

// Unit-rate Poisson points on (0, cutoff].
PppStream sample_ppp(double cutoff, Rng& rng);

struct CascadeParams {
    int r = 0;
    // Cumulative-weight cutoff. Nodes with cumulative position above s_max are
    // not expanded. Expected node count grows like s_max^r / r!.
    double s_max = 8.0;
    // Adds e^{-s_max} per expanded non-leaf node, the expected mass of its
    // discarded subtree, so that E Z_r = 1 holds exactly for any cutoff.
    bool compensate = true;
};

// Expected discarded mass of the uncompensated truncation, P(Gamma_r > s_max).
double truncated_mass(const CascadeParams& params);

double sample_cascade(const CascadeParams& params, Rng rng);

// Sample i uses rng.child(i).
std::vector<double> sample_cascades(const CascadeParams& params, std::size_t count, const Rng& rng,
                                    int workers = 1);

// Node counts per depth 0..r with cumulative position <= s_max; mean s^d / d!.
std::vector<std::uint64_t> cascade_node_counts(const CascadeParams& params, Rng rng);

// One application of T: N_out draws of sum_i e^{-eta_i} X_i with X_i
// bootstrapped from `input` and eta truncated at s_max.
EmpiricalDist apply_T(const EmpiricalDist& input, std::size_t n_out, const Rng& rng,
                      double s_max = 25.0);

// W2 between two empirical laws of equal size (sorted-sample coupling).
double w2_distance(const EmpiricalDist& a, const EmpiricalDist& b);

// d_j = W2(T^j mu0, T^j nu0) for j = 0..k under coupled bootstraps. Both
// inputs must have mean within 1e-2 of 1.
std::vector<double> contraction_trace(const EmpiricalDist& mu0, const EmpiricalDist& nu0, int k,
                                      std::size_t n, const Rng& rng, double s_max = 25.0);

// Monte Carlo E exp(-t Z_r) for each t.
std::vector<double> cascade_laplace(const CascadeParams& params, const std::vector<double>& t_grid,
                                    std::size_t n, const Rng& rng, int workers = 1);

// Z = E1 * E2.
double sample_Z(Rng& rng);

}  // namespace fpp
