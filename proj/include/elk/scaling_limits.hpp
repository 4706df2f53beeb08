#pragma once

#include <cmath>
#include <stdexcept>

#include "elk/ensemble.hpp"
#include "elk/finite_n_jdf.hpp"
#include "elk/quadrature.hpp"
#include "elk/special_functions.hpp"

namespace elk {

inline double wigner_semicircle(double z) {
    if (std::abs(z) > 2.0) throw std::domain_error("wigner_semicircle: |z| must be <= 2");
    return std::sqrt(4.0 - z * z) / (2.0 * M_PI);
}

// Bulk of the real spectrum, z in units of sqrt(N), overlap in units of N.
struct BulkPoint {
    double tau, z, t;

    BulkPoint(double tau_, double z_, double t_) : tau(tau_), z(z_), t(t_) {
        if (!(tau >= 0.0 && tau < 1.0)) throw std::domain_error("BulkPoint: tau in [0,1)");
        if (!(std::abs(z) < 1.0 + tau)) throw std::domain_error("BulkPoint: |z| < 1+tau required");
        if (!(t > 0.0)) throw std::domain_error("BulkPoint: t must be > 0");
    }
};

// Edge of the real spectrum, z = sqrt(N)(1+tau) + delta sqrt(1-tau^2),
// q = sigma sqrt(N(1-tau^2)).
struct EdgePoint {
    double tau, delta, sigma;

    EdgePoint(double tau_, double delta_, double sigma_) : tau(tau_), delta(delta_), sigma(sigma_) {
        if (!(tau >= 0.0 && tau < 1.0)) throw std::domain_error("EdgePoint: tau in [0,1)");
        if (!(sigma > 0.0)) throw std::domain_error("EdgePoint: sigma must be > 0");
    }
};

// Weak non-Hermiticity, a^2 = 2N(1-tau) fixed; A = (pi rho_sc(z) a)^2 is the
// effective asymmetry at location z.
struct WeakPoint {
    double a, z, t;
    double A;

    WeakPoint(double a_, double z_, double t_) : a(a_), z(z_), t(t_) {
        if (!(a > 0.0)) throw std::domain_error("WeakPoint: a must be > 0");
        if (!(std::abs(z) < 2.0)) throw std::domain_error("WeakPoint: |z| < 2 required");
        if (!(t > 0.0)) throw std::domain_error("WeakPoint: t must be > 0");
        A = std::pow(M_PI * wigner_semicircle(z) * a, 2);
    }
};

// Limiting bulk law: an inverse-gamma profile in t with the t^-2 tail.
inline double bulk_jdf(const BulkPoint& p) {
    const double s = 1.0 - p.z * p.z / ((1.0 + p.tau) * (1.0 + p.tau));
    const double c = 1.0 - p.tau * p.tau;
    return std::sqrt(c) / (2.0 * std::sqrt(2.0 * M_PI)) * s / (p.t * p.t) *
           std::exp(-c / (2.0 * p.t) * s);
}

inline double edge_jdf(const EdgePoint& p) {
    const double c = 1.0 - p.tau * p.tau;
    return 1.0 / (4.0 * M_PI * p.sigma * p.sigma * c) *
           std::exp(-1.0 / (4.0 * p.sigma * p.sigma) + p.delta / p.sigma) *
           (std::exp(-2.0 * p.delta * p.delta) +
            (1.0 / p.sigma - 2.0 * p.delta) * gaussian_tail(2.0 * p.delta));
}

namespace detail {

// int_0^1 e^{-A s^2/2} f(s) ds by composite 64-node Gauss-Legendre; the panel
// split tracks the integrand's 1/sqrt(A) width so the documented A <= 1e4
// range stays below 1e-12 relative error.
template <class F>
inline double weak_s_integral(double A, const F& f) {
    const double split = A > 100.0 ? std::min(1.0, 10.0 / std::sqrt(A)) : 1.0;
    double v = gauss_legendre_64(f, 0.0, split);
    if (split < 1.0) v += gauss_legendre_64(f, split, 1.0);
    return v;
}

inline double weak_i1(double A) {
    // int_0^1 e^{-A s^2 / 2} ds
    if (A == 0.0) return 1.0;
    return std::sqrt(M_PI / (2.0 * A)) * std::erf(std::sqrt(0.5 * A));
}

}  // namespace detail

// Mean density of real eigenvalues in the weak regime.
inline double weak_density(double a, double z) {
    if (!(a > 0.0)) throw std::domain_error("weak_density: a must be > 0");
    if (std::abs(z) > 2.0) throw std::domain_error("weak_density: |z| <= 2 required");
    if (std::abs(z) == 2.0) return 0.0;
    const double rho = wigner_semicircle(z);
    const double A = std::pow(M_PI * rho * a, 2);
    return rho * detail::weak_i1(A);
}

// Weak-regime JDF, quadrature form.
inline double weak_jdf(const WeakPoint& p) {
    const double A = p.A;
    const double t = p.t;
    const double integral = detail::weak_s_integral(A, [&](double s) {
        const double s2 = s * s;
        return std::exp(-0.5 * A * s2) * (1.0 + A + A / t - A * s2) * s2;
    });
    return 0.5 * A * wigner_semicircle(p.z) * std::exp(-0.5 * A / t) / (t * t) * integral;
}

// Same law after integration by parts; agreement with weak_jdf is asserted in
// the test suites (dual-route check).
inline double weak_jdf_by_parts(const WeakPoint& p) {
    const double A = p.A;
    const double t = p.t;
    const double i1 = detail::weak_i1(A);
    const double bracket =
        (2.0 / A - 1.0 / t) * std::exp(-0.5 * A) + (1.0 + 1.0 / t - 2.0 / A) * i1;
    return 0.5 * A * wigner_semicircle(p.z) * std::exp(-0.5 * A / t) / (t * t) * bracket;
}

// |N jdf_t(z sqrt(N), N t) - bulk_jdf|, used to demonstrate decay in N.
inline double bulk_convergence_error(const EnsembleParams& params, double z, double t) {
    const BulkPoint p(params.tau, z, t);
    const double n = params.n;
    const double finite = n * jdf_t(params, z * std::sqrt(n), n * t);
    return std::abs(finite - bulk_jdf(p));
}

// |sqrt(N) jdf_q(sqrt(N)(1+tau) + delta sqrt(1-tau^2), sigma sqrt(N(1-tau^2))) - edge_jdf|.
inline double edge_convergence_error(const EnsembleParams& params, double delta, double sigma) {
    const EdgePoint p(params.tau, delta, sigma);
    const double n = params.n;
    const double c = 1.0 - params.tau * params.tau;
    const double z = std::sqrt(n) * (1.0 + params.tau) + delta * std::sqrt(c);
    const double q = sigma * std::sqrt(n * c);
    return std::abs(std::sqrt(n) * jdf_q(params, z, q) - edge_jdf(p));
}

// |N^{-1/2} jdf_t(z sqrt(N), t) - weak_jdf| at tau = 1 - a^2/(2N).
inline double weak_convergence_error(int n, double a, double z, double t) {
    const WeakPoint p(a, z, t);
    const double tau = 1.0 - a * a / (2.0 * n);
    if (!(tau >= 0.0)) throw std::domain_error("weak_convergence_error: a^2 > 2N");
    const EnsembleParams params(n, tau);
    const double finite = jdf_t(params, z * std::sqrt(n), t) / std::sqrt(n);
    return std::abs(finite - weak_jdf(p));
}

}  // namespace elk
