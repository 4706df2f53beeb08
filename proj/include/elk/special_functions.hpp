#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "elk/errors.hpp"
#include "elk/signed_log.hpp"

namespace elk {

inline double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

// Monic (probabilists') Hermite polynomials He_0..He_{n_max} at x via the
// forward three-term recurrence He_{n+1} = x He_n - n He_{n-1}.
inline std::vector<SignedLog> hermite_sequence(double x, int n_max) {
    if (!std::isfinite(x)) throw std::domain_error("hermite_sequence: x must be finite");
    if (n_max < 0) throw std::domain_error("hermite_sequence: n_max must be >= 0");
    std::vector<SignedLog> he(static_cast<std::size_t>(n_max) + 1);
    he[0] = SignedLog::from(1.0);
    if (n_max == 0) return he;
    he[1] = SignedLog::from(x);
    const SignedLog sx = SignedLog::from(x);
    for (int n = 1; n < n_max; ++n) {
        he[n + 1] = sx * he[n] - static_cast<double>(n) * he[n - 1];
    }
    return he;
}

// phi_k = tau^{k/2} He_k(z/sqrt(tau)) / sqrt(k!), kept as mantissa*exp(log_scale)
// pairs so the sequence stays representable far beyond double range.
struct ScaledSequence {
    std::vector<double> mantissa;
    std::vector<double> log_scale;

    SignedLog get(int k) const {
        const double m = mantissa[static_cast<std::size_t>(k)];
        if (m == 0.0) return SignedLog::zero();
        return {log_scale[static_cast<std::size_t>(k)] + std::log(std::abs(m)), m > 0 ? 1 : -1};
    }
};

inline ScaledSequence phi_sequence_scaled(double z, double tau, int n_max) {
    if (!(tau > 0.0)) throw std::domain_error("phi_sequence: tau must be > 0");
    if (n_max < 0) throw std::domain_error("phi_sequence: n_max must be >= 0");
    ScaledSequence seq;
    seq.mantissa.resize(static_cast<std::size_t>(n_max) + 1);
    seq.log_scale.resize(static_cast<std::size_t>(n_max) + 1);
    double prev = 0.0, curr = 1.0, scale = 0.0;  // phi_{-1}, phi_0
    seq.mantissa[0] = curr;
    seq.log_scale[0] = scale;
    for (int k = 0; k < n_max; ++k) {
        const double dk = static_cast<double>(k);
        double next = z * curr / std::sqrt(dk + 1.0) - tau * std::sqrt(dk / (dk + 1.0)) * prev;
        prev = curr;
        curr = next;
        const double mag = std::max(std::abs(curr), std::abs(prev));
        if (mag > 1e120 || (mag < 1e-120 && mag > 0.0)) {
            const double c = std::log(mag);
            const double f = std::exp(-c);
            curr *= f;
            prev *= f;
            scale += c;
        }
        seq.mantissa[static_cast<std::size_t>(k) + 1] = curr;
        seq.log_scale[static_cast<std::size_t>(k) + 1] = scale;
    }
    return seq;
}

// Plain-double view of phi_k; overflows only if the true value leaves double range.
inline std::vector<double> phi_sequence(double z, double tau, int n_max) {
    const ScaledSequence seq = phi_sequence_scaled(z, tau, n_max);
    std::vector<double> out(seq.mantissa.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = seq.mantissa[k] * std::exp(seq.log_scale[k]);
    }
    return out;
}

namespace detail {

// log of the regularized lower incomplete gamma P(a,x) by series, valid x < a+1
inline double log_gamma_p_series(double a, double x) {
    double sum = 1.0, term = 1.0, comp = 0.0;
    for (int k = 1; k < 100000; ++k) {
        term *= x / (a + k);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (std::abs(term) < std::abs(sum) * 1e-17) break;
    }
    return a * std::log(x) - x - std::lgamma(a + 1.0) + std::log(sum);
}

// log of the regularized upper incomplete gamma Q(a,x) by continued fraction
// (modified Lentz), valid x >= a+1
inline double log_gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 100000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return -x + a * std::log(x) - std::lgamma(a) + std::log(h);
}

}  // namespace detail

// log of Q(a,x) = Gamma(a,x)/Gamma(a), regularized upper incomplete gamma
inline double log_gamma_q(double a, double x) {
    if (!(a > 0.0)) throw std::domain_error("log_gamma_q: a must be > 0");
    if (x < 0.0) throw std::domain_error("log_gamma_q: x must be >= 0");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return std::log1p(-std::exp(detail::log_gamma_p_series(a, x)));
    return detail::log_gamma_q_cf(a, x);
}

inline double gamma_q(double a, double x) { return std::exp(log_gamma_q(a, x)); }

// Gamma(n+1, x) = int_x^inf u^n e^{-u} du
inline SignedLog upper_incomplete_gamma(int n, double x) {
    if (n < 0) throw std::domain_error("upper_incomplete_gamma: n must be >= 0");
    if (x < 0.0) throw std::domain_error("upper_incomplete_gamma: x must be >= 0");
    return {log_factorial(n) + log_gamma_q(n + 1.0, x), 1};
}

// theta_N(x) = Gamma(N+1, N x)/Gamma(N+1); 1 for x <= 0 (tail integral covers
// the whole mass), converging to the indicator of x < 1 as N grows.
inline double theta_step(int n, double x) {
    if (n < 1) throw std::domain_error("theta_step: N must be >= 1");
    if (!std::isfinite(x)) throw std::domain_error("theta_step: x must be finite");
    if (x <= 0.0) return 1.0;
    return gamma_q(n + 1.0, static_cast<double>(n) * x);
}

// int_x^inf e^{-u^2/2} du
inline double gaussian_tail(double x) {
    if (!std::isfinite(x)) throw std::domain_error("gaussian_tail: x must be finite");
    return std::sqrt(M_PI / 2.0) * std::erfc(x * M_SQRT1_2);
}

}  // namespace elk
