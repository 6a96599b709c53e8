#include "fpp/limit_law.hpp"

#include <cmath>
#include <vector>

#include <boost/math/special_functions/bessel.hpp>

#include "fpp/errors.hpp"

namespace fpp {
namespace {

// The integrands below change shape on the scale of a possibly tiny corner
// point c; decade breakpoints c, 10c, ... up to 1 keep each panel smooth.
std::vector<double> decade_breaks(double c) {
    std::vector<double> b{c};
    for (double x = 10.0 * c; x < 1.0; x *= 10.0) b.push_back(x);
    b.push_back(1.0);
    return b;
}

}  // namespace

QuadResult limit_cdf_detail(double t, const QuadratureSpec& spec) {
    if (!std::isfinite(t)) throw DomainError("limit_cdf: t must be finite");
    const double c = std::exp(1.0 - t);
    if (!std::isfinite(c)) return {0.0, 0.0};
    auto f = [c](double x) { return x * std::exp(-x) / (c + x); };
    QuadResult r = integrate_split(f, 0.0, spec.tail_cut, decade_breaks(c), spec);
    // int_T^inf x e^{-x}/(c+x) dx <= e^{-T}
    r.error += std::exp(-spec.tail_cut);
    return r;
}

double limit_cdf(double t) { return limit_cdf_detail(t).value; }

QuadResult cox_avoidance_detail(double a, const QuadratureSpec& spec) {
    if (!std::isfinite(a)) throw DomainError("cox_avoidance: a must be finite");
    const double k = std::exp(a - 1.0);
    if (!std::isfinite(k)) return {0.0, 0.0};
    auto f = [k](double x) { return std::exp(-x) / (1.0 + k * x); };
    QuadResult r = integrate_split(f, 0.0, spec.tail_cut, decade_breaks(1.0 / k), spec);
    r.error += std::exp(-spec.tail_cut);
    return r;
}

double cox_avoidance(double a) { return cox_avoidance_detail(a).value; }

double mixture_density_oracle(double z) {
    if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("mixture density: z must be positive");
    // x = e^u: int exp(-e^u - z e^{-u}) du, peaked at u = ln(z)/2. Outside
    // +-delta the exponent exceeds its minimum 2 sqrt(z) by more than 60.
    const double mid = 0.5 * std::log(z);
    const double delta = std::acosh(1.0 + 30.0 / std::sqrt(z));
    auto f = [z](double u) { return std::exp(-std::exp(u) - z * std::exp(-u)); };
    QuadratureSpec spec;
    spec.rel_tol = 1e-12;
    return integrate_split(f, mid - delta, mid + delta, {mid}, spec).value;
}

double mixture_cdf_oracle(double z) {
    if (std::isnan(z)) throw DomainError("mixture cdf: z is nan");
    if (z <= 0.0) return 0.0;
    if (std::isinf(z)) return 1.0;
    // P(E1 E2 > z) = E e^{-z/E1} = int_0^inf e^{-x - z/x} dx, cut where e^{-x} < 1e-20.
    auto f = [z](double x) { return x > 0.0 ? std::exp(-x - z / x) : 0.0; };
    QuadratureSpec spec;
    spec.abs_tol = 1e-13;
    spec.rel_tol = 1e-12;
    const double hi = std::max(46.0, 4.0 * std::sqrt(z) + 46.0);
    return 1.0 - integrate_split(f, 0.0, hi, {std::sqrt(z), 1.0}, spec).value;
}

double mixture_density_claimed(double z) {
    if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("mixture density: z must be positive");
    return 2.0 * z * z * boost::math::cyl_bessel_k(0, 2.0 * std::sqrt(z));
}

double mixture_moment(DensityCurve curve, int p, double z0, double z1) {
    if (z0 < 0.0 || !(z1 > z0)) throw DomainError("mixture_moment: need 0 <= z0 < z1");
    // z = e^s; the densities decay like e^{-2 sqrt z}, negligible past z = 6000.
    const double s_lo = z0 > 0.0 ? std::log(z0) : -80.0;
    const double s_hi = std::isfinite(z1) ? std::log(z1) : std::log(6000.0);
    auto f = [curve, p](double s) {
        const double z = std::exp(s);
        const double dens =
            curve == DensityCurve::oracle ? mixture_density_oracle(z) : mixture_density_claimed(z);
        return std::exp((p + 1) * s) * dens;
    };
    // The inner density is itself a quadrature, so the outer rule cannot
    // resolve below its noise; a 1e-11 relative target keeps the recursion shallow.
    QuadratureSpec spec;
    spec.rel_tol = 1e-11;
    spec.abs_tol = 1e-11;
    spec.max_depth = 12;
    return integrate_split(f, s_lo, s_hi, {-10.0, 0.0, 3.0}, spec).value;
}

}  // namespace fpp
