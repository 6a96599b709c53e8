#pragma once

// Limiting law of the centered first-passage time and the Cox process
// with random intensity Z e^{x-1} dx, Z = E1 * E2 for independent Exp(1).

#include <limits>

#include "fpp/quadrature.hpp"

namespace fpp {

// F(t) = lim P(n (m_n - 1) <= t) = int_0^inf x e^{-x} / (e^{1-t} + x) dx.
QuadResult limit_cdf_detail(double t, const QuadratureSpec& spec = {});
double limit_cdf(double t);

// P(no point of the Cox process in (-inf, a]) = int_0^inf e^{-x} / (1 + e^{a-1} x) dx.
QuadResult cox_avoidance_detail(double a, const QuadratureSpec& spec = {});
double cox_avoidance(double a);

// Density of Z from first principles: int_0^inf e^{-x - z/x} / x dx (= 2 K_0(2 sqrt z)).
double mixture_density_oracle(double z);

// P(Z <= z) = 1 - int_0^inf e^{-x - z/x} dx, the same integrand integrated over z.
double mixture_cdf_oracle(double z);

// The curve 2 z^2 K_0(2 sqrt z), as printed for the mixture density. Kept for auditing.
double mixture_density_claimed(double z);

enum class DensityCurve { oracle, claimed };

// int_{z0}^{z1} z^p f(z) dz for the chosen curve; z1 may be +infinity.
double mixture_moment(DensityCurve curve, int p, double z0 = 0.0,
                      double z1 = std::numeric_limits<double>::infinity());

}  // namespace fpp
