#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "fpp/cascade.hpp"
#include "fpp/errors.hpp"
#include "fpp/limit_law.hpp"
#include "fpp/stats.hpp"
#include "oracles.hpp"

using namespace fpp;

TEST_CASE("exponential-integral oracle") {
    CHECK(oracle::expint_e1(1.0) == doctest::Approx(0.21938393439552).epsilon(1e-13));
}

TEST_CASE("F(1) = 1 - e E1(1) and avoidance(1) = e E1(1)") {
    const double e1 = oracle::expint_e1(1.0);
    CHECK(std::fabs(limit_cdf(1.0) - (1.0 - std::numbers::e * e1)) < 1e-9);
    CHECK(limit_cdf(1.0) == doctest::Approx(0.4036526).epsilon(1e-7));
    CHECK(std::fabs(cox_avoidance(1.0) - std::numbers::e * e1) < 1e-9);
    CHECK(cox_avoidance(1.0) == doctest::Approx(0.5963474).epsilon(1e-7));
}

TEST_CASE("saturation") {
    CHECK(limit_cdf(-40.0) < 1e-9);
    CHECK(limit_cdf(40.0) > 1.0 - 1e-9);
    CHECK(1.0 - cox_avoidance(-40.0) < 1e-9);
    CHECK(cox_avoidance(40.0) < 1e-9);
}

TEST_CASE("error budget includes the tail cut") {
    const QuadResult r = limit_cdf_detail(0.5);
    CHECK(r.error >= std::exp(-45.0));
    CHECK(r.error < 1e-9);
}

TEST_CASE("complement identity and the second representation") {
    boost::math::quadrature::exp_sinh<double> es;
    for (double t = -5.0; t <= 5.0; t += 0.25) {
        const double f = limit_cdf(t);
        CHECK(std::fabs(f + cox_avoidance(t) - 1.0) < 1e-9);
        const double k = std::exp(t - 1.0);
        const double other = 1.0 - es.integrate([k](double x) { return std::exp(-x) / (1.0 + k * x); });
        CHECK(std::fabs(f - other) < 1e-9);
    }
}

TEST_CASE("F is strictly increasing, hazard increasing") {
    double prev = -1.0;
    double prev_h = -1.0;
    for (double t = -6.0; t <= 6.0; t += 0.05) {
        const double f = limit_cdf(t);
        CHECK(f > prev);
        prev = f;
        const double h = -std::log(cox_avoidance(t));
        CHECK(h > prev_h);
        prev_h = h;
    }
}

TEST_CASE("F(0) against the Cox representation by Monte Carlo") {
    // P(min <= 0) = 1 - E exp(-Z e^{-1})
    Rng rng(5, 0);
    const int n = 1'000'000;
    std::vector<double> v(n);
    for (auto& x : v) x = std::exp(-sample_Z(rng) * std::exp(-1.0));
    const MeanEstimate e = mean_with_stderr(v);
    CHECK(std::fabs(limit_cdf(0.0) - (1.0 - e.mean)) < 3.0 * e.se);
}

TEST_CASE("density oracle") {
    CHECK_THROWS_AS(mixture_density_oracle(0.0), DomainError);
    CHECK_THROWS_AS(mixture_density_oracle(-1.0), DomainError);
    for (const double z : {1e-4, 0.01, 0.3, 1.0, 4.0, 25.0, 100.0}) {
        const double k0 = 2.0 * boost::math::cyl_bessel_k(0, 2.0 * std::sqrt(z));
        CHECK(std::fabs(mixture_density_oracle(z) / k0 - 1.0) < 1e-9);
    }
}

TEST_CASE("density moments") {
    CHECK(std::fabs(mixture_moment(DensityCurve::oracle, 0) - 1.0) < 1e-6);
    CHECK(std::fabs(mixture_moment(DensityCurve::oracle, 1) - 1.0) < 1e-6);
    CHECK(std::fabs(mixture_moment(DensityCurve::oracle, 2) - 4.0) < 1e-4);
    // the printed curve 2 z^2 K_0(2 sqrt z) carries mass (2!)^2 = 4
    CHECK(std::fabs(mixture_moment(DensityCurve::claimed, 0) - 4.0) < 1e-4);
    CHECK(std::fabs(mixture_moment(DensityCurve::claimed, 0) - 1.0) > 1.0);
    CHECK_THROWS_AS(mixture_moment(DensityCurve::oracle, 0, 2.0, 1.0), DomainError);
}

TEST_CASE("cdf oracle") {
    CHECK(mixture_cdf_oracle(0.0) == 0.0);
    CHECK(mixture_cdf_oracle(-1.0) == 0.0);
    for (const double z : {0.001, 0.1, 1.0, 3.0, 10.0, 40.0}) {
        const double s = 2.0 * std::sqrt(z);
        CHECK(std::fabs(mixture_cdf_oracle(z) - (1.0 - s * boost::math::cyl_bessel_k(1, s))) < 1e-10);
    }
    CHECK(std::fabs(mixture_moment(DensityCurve::oracle, 0, 0.0, 2.0) - mixture_cdf_oracle(2.0)) < 1e-8);
}

TEST_CASE("histogram of Z against the density: chi-square p > 0.01") {
    const std::vector<double> edges{0.0, 0.01, 0.03, 0.06, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5, 0.7, 0.9, 1.2,
                                    1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 7.0, 10.0, 15.0};
    Rng rng(17, 4);
    const int draws = 1'000'000;
    std::vector<double> obs(edges.size(), 0.0);
    for (int i = 0; i < draws; ++i) {
        const double z = sample_Z(rng);
        obs[static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), z) - edges.begin()) - 1] += 1.0;
    }
    double chi2 = 0.0;
    for (std::size_t b = 0; b < edges.size(); ++b) {
        const double lo = b == 0 ? 0.0 : mixture_cdf_oracle(edges[b]);
        const double hi = b + 1 < edges.size() ? mixture_cdf_oracle(edges[b + 1]) : 1.0;
        const double expect = (hi - lo) * draws;
        chi2 += (obs[b] - expect) * (obs[b] - expect) / expect;
    }
    CHECK(chi_square_sf(chi2, static_cast<int>(edges.size()) - 1) > 0.01);
}
