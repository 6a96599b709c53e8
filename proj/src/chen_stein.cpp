#include "fpp/chen_stein.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fpp/errors.hpp"
#include "fpp/fpp_engine.hpp"
#include "fpp/gamma_tails.hpp"
#include "fpp/quadrature.hpp"

namespace fpp {
namespace {

// Key domain of the middle-resampling environments.
constexpr std::uint64_t kMiddleDomain = 0xC3A5C85C97CB3127ull;
constexpr std::uint64_t kBootstrapDomain = 0x2545F4914F6CDD1Dull;

void check_split(int n, int r) {
    if (r < 0 || 2 * r >= n) {
        throw DomainError("need 0 <= r and 2r < n (n = " + std::to_string(n) + ", r = " + std::to_string(r) +
                          ")");
    }
}

struct OrderedSeq {
    std::vector<std::uint8_t> dirs;
    std::uint32_t mask = 0;
    double weight = 0.0;
};

// All ordered r-sequences of distinct directions, in lexicographic order.
template <class Visit>
void for_each_sequence(int n, int r, Visit&& visit) {
    std::vector<std::uint8_t> seq(static_cast<std::size_t>(r));
    std::uint32_t used = 0;
    auto rec = [&](auto&& self, int depth) -> void {
        if (depth == r) {
            visit(seq, used);
            return;
        }
        for (int d = 0; d < n; ++d) {
            if (used & (std::uint32_t{1} << d)) continue;
            used |= std::uint32_t{1} << d;
            seq[static_cast<std::size_t>(depth)] = static_cast<std::uint8_t>(d);
            self(self, depth + 1);
            used &= ~(std::uint32_t{1} << d);
        }
    };
    rec(rec, 0);
}

// Prefix x walks 0 -> e_{x_0} -> ...; suffix y ends at the all-ones vertex.
std::vector<OrderedSeq> prefixes(const WeightField& field, int r) {
    std::vector<OrderedSeq> out;
    for_each_sequence(field.dimension(), r, [&](const std::vector<std::uint8_t>& s, std::uint32_t used) {
        double w = 0.0;
        std::uint32_t tail = 0;
        for (const auto d : s) {
            w += field.weight_unchecked(tail, d);
            tail |= std::uint32_t{1} << d;
        }
        out.push_back({s, used, w});
    });
    return out;
}

std::vector<OrderedSeq> suffixes(const WeightField& field, int r) {
    const std::uint32_t full = full_mask(field.dimension());
    std::vector<OrderedSeq> out;
    for_each_sequence(field.dimension(), r, [&](const std::vector<std::uint8_t>& s, std::uint32_t used) {
        double w = 0.0;
        std::uint32_t tail = full & ~used;
        for (const auto d : s) {
            w += field.weight_unchecked(tail, d);
            tail |= std::uint32_t{1} << d;
        }
        out.push_back({s, used, w});
    });
    return out;
}

double factorial(int k) { return std::tgamma(k + 1.0); }

// Rank of a sequence of distinct values from {0..n-1} in mixed radix n, n-1, ...
std::size_t rank_sequence(const std::uint8_t* s, int len, int n) {
    std::size_t rank = 0;
    std::uint32_t used = 0;
    for (int i = 0; i < len; ++i) {
        const std::uint32_t below = (std::uint32_t{1} << s[i]) - 1u;
        const int digit = s[i] - __builtin_popcount(used & below);
        rank = rank * static_cast<std::size_t>(n - i) + static_cast<std::size_t>(digit);
        used |= std::uint32_t{1} << s[i];
    }
    return rank;
}

}  // namespace

std::uint64_t boundary_pair_count(int n, int r) {
    check_split(n, r);
    long double c = 1.0L;
    for (int i = 0; i < 2 * r; ++i) c *= static_cast<long double>(n - i);
    return c > 1.8e19L ? UINT64_MAX : static_cast<std::uint64_t>(c);
}

OuterConditioning outer_conditioning(const WeightField& field, int r) {
    const int n = field.dimension();
    if (boundary_pair_count(n, r) > kMaxBoundaryPairs) {
        throw CapacityError("more than 10^8 boundary pairs for n = " + std::to_string(n) +
                            ", r = " + std::to_string(r));
    }
    OuterConditioning oc;
    oc.n = n;
    oc.r = r;
    const auto pre = prefixes(field, r);
    const auto suf = suffixes(field, r);
    oc.pairs.reserve(static_cast<std::size_t>(boundary_pair_count(n, r)));
    for (const auto& x : pre) {
        for (const auto& y : suf) {
            if (x.mask & y.mask) continue;
            oc.pairs.push_back({x.dirs, y.dirs, x.weight + y.weight});
        }
    }
    return oc;
}

double conditional_lambda(const WeightField& field, int r, double a) {
    const int n = field.dimension();
    if (boundary_pair_count(n, r) > kMaxBoundaryPairs) {
        throw CapacityError("more than 10^8 boundary pairs for n = " + std::to_string(n) +
                            ", r = " + std::to_string(r));
    }
    const int m = n - 2 * r;
    const double budget = 1.0 + a / n;
    const auto pre = prefixes(field, r);
    const auto suf = suffixes(field, r);
    double sum = 0.0;
    for (const auto& x : pre) {
        const double left = budget - x.weight;
        if (left <= 0.0) continue;
        for (const auto& y : suf) {
            if (x.mask & y.mask) continue;
            const double c = left - y.weight;
            if (c > 0.0) sum += gamma_cdf(m, c);
        }
    }
    return factorial(m) * sum;
}

double joint_inclusion(int m, int k, double c, double c_prime) {
    if (m < 1 || k < 0 || k > m) throw DomainError("joint_inclusion: need 0 <= k <= m, m >= 1");
    const double lo = std::min(c, c_prime);
    if (lo <= 0.0) return 0.0;
    if (k == m) return gamma_cdf(m, lo);
    if (k == 0) return gamma_cdf(m, c) * gamma_cdf(m, c_prime);
    const int rest = m - k;
    auto f = [&](double s) { return gamma_pdf(k, s) * gamma_cdf(rest, c - s) * gamma_cdf(rest, c_prime - s); };
    QuadratureSpec spec;
    spec.rel_tol = 1e-12;
    return integrate(f, 0.0, lo, spec).value;
}

CsReport cs_bound(const WeightField& field, int r, double a) {
    const int n = field.dimension();
    check_split(n, r);
    if (n > kMaxBoundDimension) {
        throw CapacityError("cs_bound enumerates path pairs and supports n <= 10, got n = " + std::to_string(n));
    }
    const int m = n - 2 * r;
    const int len = 2 * r;
    const double budget = 1.0 + a / n;

    CsReport rep;
    const OuterConditioning oc = outer_conditioning(field, r);
    struct Active {
        const BoundaryPair* pair;
        double c;
        double p;
    };
    std::vector<Active> active;
    for (const auto& bp : oc.pairs) {
        const double c = budget - bp.weight;
        if (c > 0.0) active.push_back({&bp, c, gamma_cdf(m, c)});
    }
    rep.active_pairs = active.size();
    const double paths_per_pair = factorial(m);
    for (const auto& ap : active) {
        rep.lambda += paths_per_pair * ap.p;
        rep.term1 += paths_per_pair * ap.p * ap.p;
    }
    if (active.empty() || m == 0) {
        rep.bound = rep.term1;
        return rep;
    }

    // census[rank(Q) * (m+1) + k]: paths rho != id with boundary pair Q sharing
    // exactly k middle edges with the identity.
    const std::size_t n_ranks = static_cast<std::size_t>(boundary_pair_count(n, r));
    const std::size_t stride = static_cast<std::size_t>(m) + 1;
    std::vector<std::uint32_t> census(n_ranks * stride, 0);
    {
        std::vector<std::uint8_t> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), std::uint8_t{0});
        std::vector<std::uint8_t> q(static_cast<std::size_t>(len));
        while (std::next_permutation(order.begin(), order.end())) {
            int k = 0;
            std::uint32_t tail = 0;
            for (int i = 0; i < n; ++i) {
                const auto d = order[static_cast<std::size_t>(i)];
                if (is_middle_step(n, r, i) && d == i && tail == (std::uint32_t{1} << i) - 1u) ++k;
                tail |= std::uint32_t{1} << d;
            }
            if (k == 0) continue;
            std::copy(order.begin(), order.begin() + r, q.begin());
            std::copy(order.end() - r, order.end(), q.begin() + r);
            ++census[rank_sequence(q.data(), len, n) * stride + static_cast<std::size_t>(k)];
        }
    }

    // Relabelling coordinates by a path sigma maps the identity to sigma and
    // preserves overlaps, so the number of paths with boundary pair P' that
    // share k middle edges with sigma is census[sigma^{-1}(P')][k].
    const std::size_t na = active.size();
    std::vector<double> pair_counts(na * na * stride, 0.0);
    std::vector<std::uint8_t> pos(static_cast<std::size_t>(n));
    std::vector<std::uint8_t> q(static_cast<std::size_t>(len));
    for (std::size_t i = 0; i < na; ++i) {
        const BoundaryPair& bp = *active[i].pair;
        std::uint32_t outer = 0;
        for (const auto d : bp.prefix) outer |= std::uint32_t{1} << d;
        for (const auto d : bp.suffix) outer |= std::uint32_t{1} << d;
        std::vector<std::uint8_t> middle;
        for (int d = 0; d < n; ++d) {
            if (!(outer & (std::uint32_t{1} << d))) middle.push_back(static_cast<std::uint8_t>(d));
        }
        for (int s = 0; s < r; ++s) {
            pos[bp.prefix[static_cast<std::size_t>(s)]] = static_cast<std::uint8_t>(s);
            pos[bp.suffix[static_cast<std::size_t>(s)]] = static_cast<std::uint8_t>(n - r + s);
        }
        do {
            for (int s = 0; s < m; ++s) pos[middle[static_cast<std::size_t>(s)]] = static_cast<std::uint8_t>(r + s);
            for (std::size_t j = 0; j < na; ++j) {
                const BoundaryPair& other = *active[j].pair;
                for (int s = 0; s < r; ++s) {
                    q[static_cast<std::size_t>(s)] = pos[other.prefix[static_cast<std::size_t>(s)]];
                    q[static_cast<std::size_t>(r + s)] = pos[other.suffix[static_cast<std::size_t>(s)]];
                }
                const std::uint32_t* row = &census[rank_sequence(q.data(), len, n) * stride];
                double* acc = &pair_counts[(i * na + j) * stride];
                for (int k = 1; k <= m; ++k) acc[k] += row[k];
            }
        } while (std::next_permutation(middle.begin(), middle.end()));
    }

    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < na; ++j) {
            const double* cnt = &pair_counts[(i * na + j) * stride];
            for (int k = 1; k <= m; ++k) {
                if (cnt[k] == 0.0) continue;
                rep.term2 += cnt[k] * active[i].p * active[j].p;
                rep.term3 += cnt[k] * joint_inclusion(m, k, active[i].c, active[j].c);
            }
        }
    }
    rep.bound = rep.term1 + rep.term2 + rep.term3;
    return rep;
}

MiddleResampledField resample_middle(const WeightField& field, int r, std::uint64_t j) {
    check_split(field.dimension(), r);
    const HypercubeInstance& in = field.instance();
    const std::uint64_t seed = mix64(in.seed ^ kMiddleDomain) ^ mix64(in.replica + kMiddleDomain);
    return {&field, WeightField({in.n, seed, j}), r};
}

double poisson_tv(const std::vector<std::uint64_t>& histogram, double lambda) {
    if (!(lambda >= 0.0)) throw DomainError("poisson_tv: lambda must be >= 0");
    const double total = static_cast<double>(std::accumulate(histogram.begin(), histogram.end(), std::uint64_t{0}));
    if (total == 0.0) throw ContractViolation("poisson_tv: empty histogram");
    double tv = 0.0;
    double covered = 0.0;
    for (std::size_t k = 0; k < histogram.size(); ++k) {
        const double q = lambda > 0.0 ? std::exp(k * std::log(lambda) - lambda - std::lgamma(k + 1.0))
                                      : (k == 0 ? 1.0 : 0.0);
        covered += q;
        tv += std::fabs(static_cast<double>(histogram[k]) / total - q);
    }
    tv += std::max(0.0, 1.0 - covered);
    return 0.5 * tv;
}

TvEstimate conditional_tv(const WeightField& field, int r, double a, std::uint64_t inner, int bootstrap) {
    const int n = field.dimension();
    check_split(n, r);
    if (n > kMaxBoundDimension) {
        throw CapacityError("conditional_tv supports n <= 10, got n = " + std::to_string(n));
    }
    if (inner == 0) throw ContractViolation("conditional_tv: need at least one inner draw");
    const double lambda = conditional_lambda(field, r, a);

    std::vector<std::uint64_t> w(inner);
    SuffixMinTable table;
    for (std::uint64_t j = 0; j < inner; ++j) {
        const MiddleResampledField src = resample_middle(field, r, j);
        build_suffix_min(src, table);
        w[j] = count_extremal(src, table, a);
    }
    auto histogram_of = [](const std::vector<std::uint64_t>& xs) {
        const std::uint64_t mx = *std::max_element(xs.begin(), xs.end());
        std::vector<std::uint64_t> h(mx + 1, 0);
        for (const auto x : xs) ++h[x];
        return h;
    };
    TvEstimate est;
    est.tv = poisson_tv(histogram_of(w), lambda);

    if (bootstrap > 1) {
        const HypercubeInstance& in = field.instance();
        Rng rng(in.seed ^ kBootstrapDomain, mix64(in.replica) ^ static_cast<std::uint64_t>(r));
        std::vector<double> reps;
        std::vector<std::uint64_t> resample(inner);
        for (int b = 0; b < bootstrap; ++b) {
            for (auto& x : resample) x = w[rng.below(inner)];
            reps.push_back(poisson_tv(histogram_of(resample), lambda));
        }
        const double mean = std::accumulate(reps.begin(), reps.end(), 0.0) / bootstrap;
        double ss = 0.0;
        for (const double v : reps) ss += (v - mean) * (v - mean);
        est.se = std::sqrt(ss / (bootstrap - 1));
    }
    return est;
}

IntSet IntSet::upto(int m) {
    IntSet s;
    for (int k = 0; k <= m; ++k) s.members.push_back(k);
    return s;
}

IntSet IntSet::of(std::vector<int> values) {
    for (const int v : values) {
        if (v < 0) throw DomainError("IntSet: members must be nonnegative");
    }
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return {std::move(values), -1};
}

bool IntSet::contains(int k) const {
    if (k < 0) return false;
    if (tail_from >= 0 && k >= tail_from) return true;
    return std::binary_search(members.begin(), members.end(), k);
}

double poisson_set_probability(double lambda, const IntSet& a) {
    if (!(lambda > 0.0)) throw DomainError("Poisson parameter must be positive");
    double p = 0.0;
    for (const int k : a.members) {
        if (a.tail_from >= 0 && k >= a.tail_from) continue;
        p += std::exp(k * std::log(lambda) - lambda - std::lgamma(k + 1.0));
    }
    if (a.tail_from == 0) {
        p += 1.0;
    } else if (a.tail_from > 0) {
        p += regularized_gamma_p(a.tail_from, lambda);  // P(Poisson >= t) = P(Gamma_t <= lambda)
    }
    return p;
}

SteinSolution stein_g(double lambda, const IntSet& a) {
    if (!(lambda > 0.0)) throw DomainError("stein_g: lambda must be positive");
    return {lambda, a, poisson_set_probability(lambda, a)};
}

double SteinSolution::f(int k) const { return (set.contains(k) ? 1.0 : 0.0) - p_set; }

// g(k) = (1/lambda) sum_{j<k} f(j) pi_j / pi_{k-1}; the ratios pi_j / pi_{k-1}
// are built downward from 1 by multiplying with j / lambda.
double SteinSolution::forward(int k) const {
    if (k <= 0) return 0.0;
    double ratio = 1.0;
    double sum = 0.0;
    for (int j = k - 1; j >= 0; --j) {
        sum += f(j) * ratio;
        ratio *= j / lambda;
        if (ratio == 0.0) break;
    }
    return sum / lambda;
}

// g(k) = -(1/lambda) sum_{j>=k} f(j) pi_j / pi_{k-1}.
double SteinSolution::tail(int k) const {
    if (k <= 0) return 0.0;
    double ratio = lambda / k;
    double sum = 0.0;
    for (int j = k;; ++j) {
        const double term = f(j) * ratio;
        sum += term;
        if (j > lambda && ratio < 1e-18 * std::max(std::fabs(sum), 1e-300)) break;
        if (ratio == 0.0) break;
        ratio *= lambda / (j + 1);
    }
    return -sum / lambda;
}

double SteinSolution::operator()(int k) const { return k <= lambda ? forward(k) : tail(k); }

double stein_sup_delta(double lambda, const IntSet& a, int lo, int hi) {
    const SteinSolution g = stein_g(lambda, a);
    double sup = 0.0;
    for (int k = std::max(lo, 0); k <= hi; ++k) sup = std::max(sup, std::fabs(g(k + 1) - g(k)));
    return sup;
}

}  // namespace fpp
