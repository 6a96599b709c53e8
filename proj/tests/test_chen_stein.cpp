#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "fpp/chen_stein.hpp"
#include "fpp/errors.hpp"
#include "fpp/fpp_engine.hpp"
#include "fpp/gamma_tails.hpp"
#include "fpp/stats.hpp"
#include "oracles.hpp"

using namespace fpp;

TEST_CASE("boundary pairs") {
    CHECK(boundary_pair_count(8, 1) == 56);
    CHECK(boundary_pair_count(10, 2) == 5040);
    CHECK(boundary_pair_count(5, 0) == 1);
    CHECK_THROWS_AS(boundary_pair_count(4, 2), DomainError);

    const WeightField f({7, 2, 0});
    const OuterConditioning oc = outer_conditioning(f, 2);
    CHECK(oc.pairs.size() == 7 * 6 * 5 * 4);
    for (const auto& bp : oc.pairs) {
        CHECK(bp.weight > 0.0);
        // the prefix and suffix weights, walked edge by edge
        std::uint32_t v = 0;
        double w = 0.0;
        for (const auto d : bp.prefix) {
            w += f.weight({v, d});
            v |= 1u << d;
        }
        std::uint32_t used = 0;
        for (const auto d : bp.suffix) used |= 1u << d;
        v = full_mask(7) & ~used;
        for (const auto d : bp.suffix) {
            w += f.weight({v, d});
            v |= 1u << d;
        }
        CHECK(std::fabs(w - bp.weight) < 1e-14);
    }
}

TEST_CASE("r = 0 reduces to the exact intensity") {
    for (const double a : {-1.0, 0.0, 1.5}) {
        CHECK(std::fabs(conditional_lambda(WeightField({9, 1, 0}), 0, a) / exact_intensity(9, a) - 1.0) < 1e-12);
    }
}

TEST_CASE("lambda against an explicit sum over paths") {
    // Every path contributes P(Gamma_m <= 1 + a/n - outer weight of its pair).
    const int n = 6;
    const int r = 1;
    const WeightField f({n, 8, 1});
    const double a = 1.0;
    double sum = 0.0;
    for (const auto& p : oracle::all_paths(n)) {
        const auto e = p.edges();
        const double outer = f.weight(e.front()) + f.weight(e.back());
        sum += gamma_cdf(n - 2 * r, 1.0 + a / n - outer);
    }
    CHECK(std::fabs(conditional_lambda(f, r, a) - sum) < 1e-12 * std::max(1.0, sum));
}

TEST_CASE("lambda is monotone in a") {
    const WeightField f({9, 4, 2});
    double prev = 0.0;
    for (double a = -3.0; a <= 3.0; a += 0.25) {
        const double l = conditional_lambda(f, 1, a);
        CHECK(l >= prev);
        prev = l;
    }
}

TEST_CASE("tower property: E lambda = exact intensity (n = 12, r = 1)") {
    std::vector<double> l(10000);
    for (std::size_t i = 0; i < l.size(); ++i) l[i] = conditional_lambda(WeightField({12, 31, i}), 1, 0.0);
    const MeanEstimate e = mean_with_stderr(l);
    CHECK(std::fabs(e.mean - exact_intensity(12, 0.0)) < 3.0 * e.se);
}

TEST_CASE("joint inclusion") {
    CHECK(joint_inclusion(5, 5, 1.2, 3.0) == doctest::Approx(gamma_cdf(5, 1.2)).epsilon(1e-14));
    CHECK(joint_inclusion(5, 0, 1.2, 0.9) == doctest::Approx(gamma_cdf(5, 1.2) * gamma_cdf(5, 0.9)).epsilon(1e-14));
    CHECK(joint_inclusion(4, 2, -0.1, 1.0) == 0.0);
    CHECK_THROWS_AS(joint_inclusion(3, 4, 1.0, 1.0), DomainError);

    // P(G + A <= c, G + B <= c') with G ~ Gamma(k), A, B ~ Gamma(m - k), by Monte Carlo.
    Rng rng(12, 0);
    const int m = 6;
    const int k = 2;
    const double c = 1.0;
    const double cp = 0.8;
    const int draws = 1'000'000;
    auto gamma_draw = [&](int shape) {
        double s = 0.0;
        for (int i = 0; i < shape; ++i) s += rng.exponential();
        return s;
    };
    std::uint64_t hits = 0;
    for (int i = 0; i < draws; ++i) {
        const double g = gamma_draw(k);
        if (g + gamma_draw(m - k) <= c && g + gamma_draw(m - k) <= cp) ++hits;
    }
    const double p = static_cast<double>(hits) / draws;
    const double se = std::sqrt(p * (1 - p) / draws);
    CHECK(std::fabs(joint_inclusion(m, k, c, cp) - p) < 3.0 * se + 1e-7);
}

TEST_CASE("bound terms against direct pair enumeration (n = 6, r = 1)") {
    const int n = 6;
    const int r = 1;
    const int m = n - 2 * r;
    const WeightField f({n, 14, 0});
    const double a = 3.0;
    const auto paths = oracle::all_paths(n);
    std::vector<double> c(paths.size());
    std::vector<double> p(paths.size());
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const auto e = paths[i].edges();
        c[i] = 1.0 + a / n - f.weight(e.front()) - f.weight(e.back());
        p[i] = gamma_cdf(m, c[i]);
    }
    double lambda = 0.0, t1 = 0.0, t2 = 0.0, t3 = 0.0;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        lambda += p[i];
        t1 += p[i] * p[i];
        for (std::size_t j = 0; j < paths.size(); ++j) {
            if (i == j) continue;
            const int k = shared_middle_edges(paths[i], paths[j], r);
            if (k == 0) continue;
            t2 += p[i] * p[j];
            t3 += joint_inclusion(m, k, c[i], c[j]);
        }
    }
    const CsReport rep = cs_bound(f, r, a);
    REQUIRE(lambda > 0.1);
    CHECK(std::fabs(rep.lambda - lambda) < 1e-10 * lambda);
    CHECK(std::fabs(rep.term1 - t1) < 1e-10 * t1);
    CHECK(std::fabs(rep.term2 - t2) < 1e-10 * std::max(t2, 1e-300));
    CHECK(std::fabs(rep.term3 - t3) < 1e-9 * std::max(t3, 1e-300));
    CHECK(rep.bound == doctest::Approx(rep.term1 + rep.term2 + rep.term3));
}

TEST_CASE("bound terms are nonnegative and term2 <= lambda^2") {
    for (std::uint64_t env = 0; env < 5; ++env) {
        const CsReport rep = cs_bound(WeightField({8, 7, env}), 1, 0.0);
        CHECK(rep.term1 >= 0.0);
        CHECK(rep.term2 >= 0.0);
        CHECK(rep.term3 >= 0.0);
        CHECK(rep.term2 <= rep.lambda * rep.lambda + 1e-15);
    }
}

TEST_CASE("middle resampling keeps outer weights") {
    const WeightField outer({8, 5, 3});
    const MiddleResampledField a = resample_middle(outer, 2, 0);
    const MiddleResampledField b = resample_middle(outer, 2, 1);
    int differ = 0;
    for (std::uint32_t v = 0; v < 256; ++v) {
        for (int j = 0; j < 8; ++j) {
            if (v >> j & 1u) continue;
            const int step = std::popcount(v);
            if (!is_middle_step(8, 2, step)) {
                CHECK(a.weight_unchecked(v, j) == outer.weight_unchecked(v, j));
            } else if (a.weight_unchecked(v, j) != b.weight_unchecked(v, j)) {
                ++differ;
            }
        }
    }
    CHECK(differ > 0);
}

TEST_CASE("poisson_tv") {
    CHECK(poisson_tv({10}, 0.0) == 0.0);
    CHECK(poisson_tv({0, 5}, 0.0) == doctest::Approx(1.0));
    // Empirical Poisson(0.5) sample against its own pmf
    Rng rng(8, 0);
    std::vector<std::uint64_t> h(20, 0);
    for (int i = 0; i < 1'000'000; ++i) ++h[rng.poisson(0.5)];
    while (h.back() == 0) h.pop_back();
    CHECK(poisson_tv(h, 0.5) < 0.003);
    CHECK_THROWS_AS(poisson_tv({0, 0}, 1.0), ContractViolation);
}

TEST_CASE("conditional TV far below the minimum is negligible") {
    const WeightField f({8, 2, 0});
    const TvEstimate e = conditional_tv(f, 1, -8.0, 10000);
    CHECK(e.tv < 1e-6);
}

TEST_CASE("conditional TV respects the bound (n = 8, r = 1, a = 0)") {
    for (std::uint64_t env = 0; env < 3; ++env) {
        const WeightField f({8, 44, env});
        const CsReport rep = cs_bound(f, 1, 0.0);
        const TvEstimate e = conditional_tv(f, 1, 0.0, 10000);
        CHECK(e.tv <= rep.bound + 3.0 * e.se);
        CHECK(e.se >= 0.0);
    }
}

TEST_CASE("capacity and domain") {
    CHECK_THROWS_AS(cs_bound(WeightField({11, 1, 0}), 1, 0.0), CapacityError);
    CHECK_THROWS_AS(conditional_tv(WeightField({11, 1, 0}), 1, 0.0, 10), CapacityError);
    CHECK_THROWS_AS(cs_bound(WeightField({6, 1, 0}), 3, 0.0), DomainError);
    CHECK_THROWS_AS(conditional_lambda(WeightField({26, 1, 0}), 4, 0.0), CapacityError);
}
