#pragma once

// Empirical laws, Kolmogorov-Smirnov distances and DKW bands.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace fpp {

// Sorted, finite, nonempty sample standing in for a probability law.
class EmpiricalDist {
public:
    explicit EmpiricalDist(std::vector<double> samples);

    static EmpiricalDist point_mass(double value, std::size_t count);

    const std::vector<double>& samples() const { return s_; }
    std::size_t size() const { return s_.size(); }
    double operator[](std::size_t i) const { return s_[i]; }

    double mean() const;
    double moment(int p) const;
    double variance() const;  // unbiased
    // Right-continuous ECDF.
    double cdf(double x) const;

private:
    std::vector<double> s_;
};

// Resamples to `count` points by the quantile map i -> s[floor((i + 1/2) N / count)].
EmpiricalDist resample_quantiles(const EmpiricalDist& d, std::size_t count);

// sup_x |ECDF(x) - cdf(x)|, both one-sided gaps at every sample point.
template <class Cdf>
double ks_distance(const EmpiricalDist& sample, Cdf&& cdf) {
    const auto n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
    }
    return std::clamp(d, 0.0, 1.0);
}

// Two-sample KS statistic sup_x |F_a(x) - F_b(x)|.
double ks_two_sample(const EmpiricalDist& a, const EmpiricalDist& b);

// DKW half-width sqrt(ln(2/alpha) / (2N)).
double dkw_epsilon(std::size_t n, double alpha = 0.01);

// Upper tail P(chi2_df >= x).
double chi_square_sf(double x, int df);

struct MeanEstimate {
    double mean = 0.0;
    double se = 0.0;  // standard error
};

MeanEstimate mean_with_stderr(const std::vector<double>& xs);

}  // namespace fpp
