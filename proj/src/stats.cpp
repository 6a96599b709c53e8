#include "fpp/stats.hpp"

#include <numeric>

#include "fpp/errors.hpp"
#include "fpp/gamma_tails.hpp"

namespace fpp {

EmpiricalDist::EmpiricalDist(std::vector<double> samples) : s_(std::move(samples)) {
    if (s_.empty()) throw ContractViolation("EmpiricalDist: empty sample");
    for (const double x : s_) {
        if (!std::isfinite(x)) throw ContractViolation("EmpiricalDist: non-finite sample");
    }
    std::sort(s_.begin(), s_.end());
}

EmpiricalDist EmpiricalDist::point_mass(double value, std::size_t count) {
    return EmpiricalDist(std::vector<double>(count, value));
}

double EmpiricalDist::mean() const { return moment(1); }

double EmpiricalDist::moment(int p) const {
    long double acc = 0.0L;
    for (const double x : s_) acc += std::pow(static_cast<long double>(x), p);
    return static_cast<double>(acc / static_cast<long double>(s_.size()));
}

double EmpiricalDist::variance() const {
    if (s_.size() < 2) return 0.0;
    const double m = mean();
    long double acc = 0.0L;
    for (const double x : s_) acc += static_cast<long double>(x - m) * (x - m);
    return static_cast<double>(acc / static_cast<long double>(s_.size() - 1));
}

double EmpiricalDist::cdf(double x) const {
    const auto it = std::upper_bound(s_.begin(), s_.end(), x);
    return static_cast<double>(it - s_.begin()) / static_cast<double>(s_.size());
}

EmpiricalDist resample_quantiles(const EmpiricalDist& d, std::size_t count) {
    if (count == 0) throw ContractViolation("resample_quantiles: count must be positive");
    if (count == d.size()) return d;
    std::vector<double> out(count);
    const auto n = static_cast<double>(d.size());
    for (std::size_t i = 0; i < count; ++i) {
        auto j = static_cast<std::size_t>((static_cast<double>(i) + 0.5) * n / static_cast<double>(count));
        out[i] = d[std::min(j, d.size() - 1)];
    }
    return EmpiricalDist(std::move(out));
}

double ks_two_sample(const EmpiricalDist& a, const EmpiricalDist& b) {
    const auto na = static_cast<double>(a.size());
    const auto nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double dkw_epsilon(std::size_t n, double alpha) {
    if (n == 0) throw ContractViolation("dkw_epsilon: empty sample");
    return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

double chi_square_sf(double x, int df) {
    if (df < 1) throw DomainError("chi_square_sf: df must be >= 1");
    return regularized_gamma_q(0.5 * df, 0.5 * x);
}

MeanEstimate mean_with_stderr(const std::vector<double>& xs) {
    if (xs.empty()) throw ContractViolation("mean_with_stderr: empty sample");
    const auto n = static_cast<double>(xs.size());
    const double m = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0.0;
    for (const double x : xs) ss += (x - m) * (x - m);
    const double var = xs.size() > 1 ? ss / (n - 1.0) : 0.0;
    return {m, std::sqrt(var / n)};
}

}  // namespace fpp
