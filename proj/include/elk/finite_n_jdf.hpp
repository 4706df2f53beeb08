#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "elk/ensemble.hpp"
#include "elk/prt_kernels.hpp"
#include "elk/quadrature.hpp"
#include "elk/signed_log.hpp"
#include "elk/special_functions.hpp"

namespace elk {

// One evaluated point of the joint density. q is the rescaled overlap variable
// of the compact form of the density; the measured overlap is t = kappa^2 - 1
// with t = (1 - tau) q. (The source text's preamble states the inverse
// relation, which its own scaling corollaries and direct Monte Carlo both
// contradict; see README notes on conventions.)
struct JdfPoint {
    double z = 0.0;
    double q = 0.0;
    double t = 0.0;
    double density = 0.0;
};

// The five bracket terms of the density, exposed because cancellation between
// them is the dominant error source near the spectral edge.
struct JdfTerms {
    double log_prefactor = 0.0;
    std::array<SignedLog, 5> bracket{};
    SignedLog bracket_total{};
    double value = 0.0;
};

namespace detail {

inline void check_jdf_args(const EnsembleParams& params, double q) {
    if (params.n < 2) throw std::domain_error("jdf: n must be >= 2");
    if (params.tau >= 1.0) throw unsupported_error("jdf: tau = 1 is unsupported");
    if (!(q > 0.0)) throw std::domain_error("jdf: q must be > 0");
}

}  // namespace detail

// Joint density of a real eigenvalue at z and rescaled overlap q, exact at
// finite N. Assembled from signed-log kernels; the N! scale and exponential
// prefactors are combined only here.
inline JdfTerms jdf_q_terms(const EnsembleParams& params, double z, double q) {
    detail::check_jdf_args(params, q);
    const int n = params.n;
    const double tau = params.tau;

    const PrtBundle b = prt_eval(params, z, {n - 3, n - 2});
    const SignedLog p2 = b.at(n - 2).p, r2 = b.at(n - 2).r;
    const SignedLog p3 = b.at(n - 3).p, r3 = b.at(n - 3).r, t3 = b.at(n - 3).t;

    JdfTerms out;
    out.log_prefactor = -std::log(2.0 * (1.0 + tau)) - 0.5 * std::log(2.0 * M_PI) -
                        log_factorial(n - 2) -
                        z * z / (2.0 * (1.0 + tau)) * (1.0 + q / (1.0 + q)) -
                        0.5 * std::log(q * (1.0 + q)) +
                        (0.5 * n - 1.0) * std::log(q / (q + 1.0 + tau));

    const double u1 = 1.0 + q;
    const double u2 = 1.0 + tau + q;
    out.bracket[0] =
        (SignedLog::from(1.0 + tau - 2.0 * z * z) * p2 +
         SignedLog::from(2.0 * z) * (r2 + SignedLog::from(tau * (n - 2.0)) * r3)) *
        (1.0 / u1);
    out.bracket[1] = SignedLog::from(z * z / (u1 * u1)) * p2;
    out.bracket[2] =
        SignedLog::from(tau * tau * (1.0 + tau) * (1.0 + tau) * n * (n - 2.0) / (u2 * u2)) * p3;
    out.bracket[3] = SignedLog::from((1.0 + tau) * (1.0 - tau * tau) * (n - 2.0) / u2) *
                     (SignedLog::from(n - 2.0) * p3 - t3);
    out.bracket[4] = SignedLog::from(-2.0 * tau * (1.0 + tau) * (n - 2.0) * z / (u1 * u2)) * r3;

    ScaledKahanSum sum;
    for (const auto& term : out.bracket) sum.add(term);
    out.bracket_total = sum.total();

    if (out.bracket_total.is_zero()) {
        out.value = 0.0;
        return out;
    }
    const double log_value = out.log_prefactor + out.bracket_total.log_abs;
    if (log_value > 700.0) {
        throw numeric_error("jdf_q overflowed double range", std::numeric_limits<double>::infinity(),
                            std::numeric_limits<double>::infinity());
    }
    const double v = out.bracket_total.sign * std::exp(log_value);
    // roundoff can leave a negligible negative residue where the density vanishes
    out.value = v < 0.0 ? 0.0 : v;
    return out;
}

inline double jdf_q(const EnsembleParams& params, double z, double q) {
    return jdf_q_terms(params, z, q).value;
}

// Density of the shifted overlap t = kappa^2 - 1 itself: t = (1 - tau) q.
inline double jdf_t(const EnsembleParams& params, double z, double t) {
    if (!(t > 0.0)) throw std::domain_error("jdf: t must be > 0");
    const double c = 1.0 - params.tau;
    return jdf_q(params, z, t / c) / c;
}

inline JdfPoint jdf_point(const EnsembleParams& params, double z, double t) {
    JdfPoint p;
    p.z = z;
    p.t = t;
    p.q = t / (1.0 - params.tau);
    p.density = jdf_t(params, z, t);
    return p;
}

// int_0^inf jdf_q dq after the substitution u^2 = q/(1+q), which removes both
// the q^{-1/2} endpoint singularity and the infinite domain.
inline double marginal_density(const EnsembleParams& params, double z, double abs_tol = 1e-10,
                               double rel_tol = 1e-8) {
    detail::check_jdf_args(params, 0.5);
    auto integrand = [&](double u) {
        const double s = 1.0 - u * u;
        const double q = u * u / s;
        return jdf_q(params, z, q) * 2.0 * u / (s * s);
    };
    return integrate(integrand, 0.0, 1.0, abs_tol, rel_tol).value;
}

// Closed-form N=2 marginal (the analytically integrated density).
inline double marginal_density_n2(double tau, double z) {
    if (!(tau >= 0.0 && tau < 1.0)) throw std::domain_error("marginal_density_n2: tau in [0,1)");
    const double c = 1.0 + tau;
    const double erf_piece = std::sqrt(M_PI * c / 2.0) * std::erf(z / std::sqrt(2.0 * c));
    return std::exp(-z * z / c) / std::sqrt(2.0 * M_PI) +
           std::exp(-z * z / (2.0 * c)) / std::sqrt(2.0 * M_PI) * z / c * erf_piece;
}

// Exact mean density of real eigenvalues (Forrester-Nagao), even N only.
inline double fn_density(const EnsembleParams& params, double z) {
    const int n = params.n;
    const double tau = params.tau;
    if (n < 2 || n % 2 != 0) {
        throw unsupported_error("fn_density: only even N is available");
    }
    if (!(tau > 0.0) || tau >= 1.0) {
        throw std::domain_error("fn_density: tau must be in (0,1)");
    }

    const ScaledSequence phi = phi_sequence_scaled(z, tau, n - 1);
    ScaledKahanSum s1;
    for (int k = 0; k <= n - 2; ++k) {
        const double m = phi.mantissa[static_cast<std::size_t>(k)];
        s1.add(m * m, 2.0 * phi.log_scale[static_cast<std::size_t>(k)]);
    }
    const SignedLog sum1 = s1.total();
    const double rho1 =
        sum1.is_zero()
            ? 0.0
            : sum1.sign * std::exp(-z * z / (1.0 + tau) - 0.5 * std::log(2.0 * M_PI) + sum1.log_abs);

    // second piece: sqrt(N-1) phi_{N-1}(z) int_0^z e^{-u^2/(2(1+tau))} phi_{N-2}(u) du
    auto integrand = [&](double u) {
        const ScaledSequence pu = phi_sequence_scaled(u, tau, n - 2);
        const double m = pu.mantissa[static_cast<std::size_t>(n - 2)];
        return std::exp(-u * u / (2.0 * (1.0 + tau)) + pu.log_scale[static_cast<std::size_t>(n - 2)]) * m;
    };
    const double integral = z == 0.0 ? 0.0 : integrate(integrand, 0.0, z, 1e-13, 1e-10).value;
    const SignedLog phil = phi.get(n - 1);
    const double rho2 = phil.is_zero() || integral == 0.0
                            ? 0.0
                            : phil.sign * integral *
                                  std::exp(-z * z / (2.0 * (1.0 + tau)) -
                                           0.5 * std::log(2.0 * M_PI) - std::log(1.0 + tau) +
                                           0.5 * std::log(n - 1.0) + phil.log_abs);
    const double rho = rho1 + rho2;
    return rho < 0.0 ? 0.0 : rho;
}

}  // namespace elk
