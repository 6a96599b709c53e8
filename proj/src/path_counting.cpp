#include "fpp/path_counting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fpp/errors.hpp"

namespace fpp {
namespace {

void check_census(int n, int r) {
    if (n < 1) throw DomainError("census: n must be >= 1");
    if (n > kMaxCensusDimension) {
        throw CapacityError("census: n = " + std::to_string(n) + " exceeds the exhaustive limit of " +
                            std::to_string(kMaxCensusDimension));
    }
    if (r < 0 || 2 * r >= n) throw DomainError("census: need 0 <= r and 2r < n");
}

}  // namespace

OverlapCensus census_against(const PathPerm& reference, int r) {
    const int n = reference.dimension();
    check_census(n, r);
    OverlapCensus c;
    c.n = n;
    c.r = r;
    c.f.assign(static_cast<std::size_t>(n) + 1, 0);
    c.f_r.assign(static_cast<std::size_t>(n) + 1, 0);

    // Edge i of the reference is (tail_i, dir_i); a path shares it iff its
    // i-th step leaves the same tail in the same direction.
    std::vector<std::uint32_t> ref_tail(static_cast<std::size_t>(n));
    std::uint32_t t = 0;
    for (int i = 0; i < n; ++i) {
        ref_tail[static_cast<std::size_t>(i)] = t;
        t |= std::uint32_t{1} << reference[static_cast<std::size_t>(i)];
    }

    std::vector<std::uint8_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), std::uint8_t{0});
    do {
        int shared = 0;
        bool middle = false;
        std::uint32_t tail = 0;
        for (int i = 0; i < n; ++i) {
            const auto d = order[static_cast<std::size_t>(i)];
            if (d == reference[static_cast<std::size_t>(i)] && tail == ref_tail[static_cast<std::size_t>(i)]) {
                ++shared;
                middle = middle || is_middle_step(n, r, i);
            }
            tail |= std::uint32_t{1} << d;
        }
        ++c.f[static_cast<std::size_t>(shared)];
        if (middle) ++c.f_r[static_cast<std::size_t>(shared)];
    } while (std::next_permutation(order.begin(), order.end()));
    return c;
}

OverlapCensus overlap_census(int n) {
    check_census(n, 0);
    return census_against(PathPerm::identity(n), 0);
}

OverlapCensus middle_census(int n, int r) {
    check_census(n, r);
    return census_against(PathPerm::identity(n), r);
}

std::vector<int> shared_positions(const PathPerm& path) {
    std::vector<int> u;
    std::uint32_t tail = 0;
    for (int i = 0; i < path.dimension(); ++i) {
        const auto d = path[static_cast<std::size_t>(i)];
        // Identity edge i has tail {0..i-1} and direction i.
        if (d == i && tail == (std::uint32_t{1} << i) - 1u) u.push_back(i + 1);
        tail |= std::uint32_t{1} << d;
    }
    return u;
}

std::map<std::vector<int>, std::uint64_t> shared_position_census(int n) {
    check_census(n, 0);
    std::map<std::vector<int>, std::uint64_t> out;
    std::vector<std::uint8_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), std::uint8_t{0});
    do {
        std::vector<int> u{0};
        const auto inner = shared_positions(PathPerm(order));
        u.insert(u.end(), inner.begin(), inner.end());
        u.push_back(n + 1);
        ++out[u];
    } while (std::next_permutation(order.begin(), order.end()));
    return out;
}

double g_upper(const std::vector<int>& u) {
    double g = 1.0;
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
        const int s = u[i + 1] - u[i];
        if (s < 1) throw DomainError("g_upper: u must be strictly increasing");
        g *= std::tgamma(static_cast<double>(s));  // (s-1)!
    }
    return g;
}

double g_function(double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0)) throw DomainError("g_function: gamma must lie in [0, 1)");
    const double a = 1.0 - gamma;
    const double num = a > 0.0 ? a * std::log(4.0 * a) : 0.0;
    return std::exp(num - (2.0 - gamma) * std::log(2.0 - gamma));
}

double overlap_bound(int n, int k) { return std::pow(n, 6) * std::tgamma(n - k + 1.0); }

double middle_overlap_bound(int n, int r) {
    return std::tgamma(r + 1.0) * std::tgamma(static_cast<double>(n - r)) * n;
}

}  // namespace fpp
