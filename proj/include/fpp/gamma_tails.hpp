#pragma once

// Gamma tail probabilities.
//
// For independent standard exponentials, P(xi_1 + ... + xi_n <= x) is the
// regularized lower incomplete gamma function P(n, x). It satisfies the
// sandwich
//
//     e^{-x} x^n / n!  <=  P(n, x)  <=  (1 + e^x x / (n+1)) e^{-x} x^n / n!
//
// which drives every intensity estimate of the extremal process.

namespace fpp {

// Regularized lower / upper incomplete gamma for real shape a > 0.
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

// ln P(a, x), accurate even when P underflows.
double log_regularized_gamma_p(double a, double x);

// P(Gamma_n <= x) for integer n >= 1; 0 for x <= 0. Throws DomainError for n < 1.
double gamma_cdf(int n, double x);

// Density of Gamma(k, 1) at s.
double gamma_pdf(int k, double s);

struct TailSandwich {
    int n = 1;
    double x = 0.0;
    double leading = 0.0;  // e^{-x} x^n / n!
    double upper_k = 0.0;  // e^x x / (n+1), upper bound of the relative error term K

    double lower() const { return leading; }
    double upper() const { return (1.0 + upper_k) * leading; }
};

TailSandwich tail_sandwich(int n, double x);

// E Xi_n((-inf, a]) = n! P(Gamma_n <= 1 + a/n), evaluated in log space.
double exact_intensity(int n, double a);

}  // namespace fpp
