#pragma once

// Exhaustive overlap censuses against a reference path, and the elementary
// functions entering the pair-counting estimates.

#include <cstdint>
#include <map>
#include <vector>

#include "fpp/core_model.hpp"

namespace fpp {

inline constexpr int kMaxCensusDimension = 10;

struct OverlapCensus {
    int n = 0;
    int r = 0;
    std::vector<std::uint64_t> f;    // f[k]: paths sharing exactly k edges with the reference
    std::vector<std::uint64_t> f_r;  // same, restricted to pairs sharing a middle-region edge
};

// Census against the identity path.
OverlapCensus overlap_census(int n);
OverlapCensus middle_census(int n, int r);

// Census against an arbitrary reference (f_r filled for the given r).
OverlapCensus census_against(const PathPerm& reference, int r);

// Positions u_1 < ... < u_k (1-based steps of `path`) of edges shared with the identity.
std::vector<int> shared_positions(const PathPerm& path);

// u-vector (0, u_1, .., u_k, n+1) -> number of paths with that vector, for the identity reference.
std::map<std::vector<int>, std::uint64_t> shared_position_census(int n);

// G(u) = prod_i (s_i - 1)! with s_i = u_{i+1} - u_i.
double g_upper(const std::vector<int>& u);

// g(gamma) = (4(1-gamma))^{1-gamma} / (2-gamma)^{2-gamma}, 0^0 = 1.
double g_function(double gamma);

// n^6 (n-k)!
double overlap_bound(int n, int k);
// r! (n-r-1)! n
double middle_overlap_bound(int n, int r);

}  // namespace fpp
