#include "fpp/gamma_tails.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fpp/errors.hpp"

namespace fpp {
namespace {

constexpr double kEps = 1e-14;
constexpr int kMaxIter = 10000;

// sum_{k>=0} x^k / ((a+1)...(a+k)); P(a,x) = e^{-x} x^a / Gamma(a+1) * series.
double lower_series(double a, double x) {
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < kMaxIter; ++k) {
        term *= x / (a + k);
        sum += term;
        if (term < sum * kEps) break;
    }
    return sum;
}

// Continued fraction for Q(a,x) = e^{-x} x^a / Gamma(a) * cf (modified Lentz).
double upper_fraction(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps) break;
    }
    return h;
}

void check_shape(double a) {
    if (!(a > 0.0)) throw DomainError("incomplete gamma: shape must be positive");
}

}  // namespace

double log_regularized_gamma_p(double a, double x) {
    check_shape(a);
    if (x <= 0.0) return -std::numeric_limits<double>::infinity();
    if (x < a + 1.0) {
        return -x + a * std::log(x) - std::lgamma(a + 1.0) + std::log(lower_series(a, x));
    }
    const double q = std::exp(-x + a * std::log(x) - std::lgamma(a)) * upper_fraction(a, x);
    return std::log1p(-q);
}

double regularized_gamma_p(double a, double x) {
    check_shape(a);
    if (x <= 0.0) return 0.0;
    if (x < a + 1.0) {
        return std::exp(-x + a * std::log(x) - std::lgamma(a + 1.0)) * lower_series(a, x);
    }
    return 1.0 - std::exp(-x + a * std::log(x) - std::lgamma(a)) * upper_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
    check_shape(a);
    if (x <= 0.0) return 1.0;
    if (x < a + 1.0) {
        return 1.0 - std::exp(-x + a * std::log(x) - std::lgamma(a + 1.0)) * lower_series(a, x);
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * upper_fraction(a, x);
}

double gamma_cdf(int n, double x) {
    if (n < 1) throw DomainError("gamma_cdf: n must be >= 1, got " + std::to_string(n));
    return regularized_gamma_p(n, x);
}

double gamma_pdf(int k, double s) {
    if (k < 1) throw DomainError("gamma_pdf: k must be >= 1");
    if (s < 0.0) return 0.0;
    if (s == 0.0) return k == 1 ? 1.0 : 0.0;
    return std::exp((k - 1) * std::log(s) - s - std::lgamma(k));
}

TailSandwich tail_sandwich(int n, double x) {
    if (n < 1) throw DomainError("tail_sandwich: n must be >= 1");
    if (!(x > 0.0)) throw DomainError("tail_sandwich: x must be positive");
    TailSandwich t;
    t.n = n;
    t.x = x;
    t.leading = std::exp(-x + n * std::log(x) - std::lgamma(n + 1.0));
    t.upper_k = std::exp(x) * x / (n + 1.0);
    return t;
}

double exact_intensity(int n, double a) {
    if (n < 1) throw DomainError("exact_intensity: n must be >= 1");
    const double x = 1.0 + a / n;
    if (x <= 0.0) return 0.0;
    return std::exp(std::lgamma(n + 1.0) + log_regularized_gamma_p(n, x));
}

}  // namespace fpp
