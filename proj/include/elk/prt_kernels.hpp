#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "elk/ensemble.hpp"
#include "elk/signed_log.hpp"
#include "elk/special_functions.hpp"

namespace elk {

// The three Hermite cross-product kernels of the joint density. P_m is the
// mean squared characteristic polynomial and is strictly positive; T_0 = 0;
// orders at -1 are exact zeros so the N=2 density reads uniformly.
struct PrtTriple {
    SignedLog p, r, t;
};

struct PrtBundle {
    double z = 0.0;
    std::map<int, PrtTriple> orders;

    const PrtTriple& at(int m) const {
        auto it = orders.find(m);
        if (it == orders.end()) throw std::out_of_range("PrtBundle: order not evaluated");
        return it->second;
    }
};

namespace detail {

inline void check_orders(const std::set<int>& orders) {
    if (orders.empty()) throw std::domain_error("prt: no orders requested");
    if (*orders.begin() < -1) throw std::domain_error("prt: orders must be >= -1");
}

// tau = 0 closed forms: P_m = e^{z^2} Gamma(m+1, z^2), R_m = z P_m,
// T_m = m z^2 P_{m-1}.
inline PrtTriple prt_tau0(int m, double z) {
    if (m < 0) return {};
    const double z2 = z * z;
    auto big_p = [&](int k) {
        return SignedLog{z2 + log_factorial(k) + log_gamma_q(k + 1.0, z2), 1};
    };
    PrtTriple out;
    out.p = big_p(m);
    out.r = SignedLog::from(z) * out.p;
    out.t = m >= 1 ? SignedLog::from(m * z2) * big_p(m - 1) : SignedLog::zero();
    return out;
}

}  // namespace detail

// Direct summation of the kernels, rewritten in the phi_k basis
// (tau^k/k! (k+1)He_k^2 -> (k+1)phi_k^2 and so on) so the summands stay
// polynomially bounded where the raw tau^k He_k^2 terms overflow.
inline PrtBundle prt_eval(const EnsembleParams& params, double z, const std::set<int>& orders) {
    detail::check_orders(orders);
    if (params.tau == 1.0) {
        throw unsupported_error("prt_eval: tau = 1 is degenerate (kappa = 1 identically)");
    }
    PrtBundle bundle;
    bundle.z = z;
    const int m_max = *orders.rbegin();
    if (params.tau == 0.0) {
        for (int m : orders) bundle.orders[m] = detail::prt_tau0(m, z);
        return bundle;
    }
    for (int m : orders) {
        if (m < 0) bundle.orders[m] = {};
    }
    if (m_max < 0) return bundle;

    const ScaledSequence phi = phi_sequence_scaled(z, params.tau, m_max + 2);
    auto mant = [&](int k) { return phi.mantissa[static_cast<std::size_t>(k)]; };
    auto scale = [&](int k) { return phi.log_scale[static_cast<std::size_t>(k)]; };

    ScaledKahanSum sp, sr, st;
    for (int k = 0; k <= m_max; ++k) {
        const double dk = static_cast<double>(k);
        // P summand: (k+1) phi_k^2 - sqrt(k(k+1)) phi_{k-1} phi_{k+1}
        sp.add((dk + 1.0) * mant(k) * mant(k), 2.0 * scale(k));
        if (k >= 1) {
            sp.add(-std::sqrt(dk * (dk + 1.0)) * mant(k - 1) * mant(k + 1),
                   scale(k - 1) + scale(k + 1));
            st.add(dk * (dk + 1.0) * mant(k) * mant(k), 2.0 * scale(k));
            st.add(-dk * std::sqrt(dk * (dk + 1.0)) * mant(k - 1) * mant(k + 1),
                   scale(k - 1) + scale(k + 1));
        }
        // R summand: (k+2) sqrt(k+1) phi_{k+1} phi_k - sqrt(k(k+1)(k+2)) phi_{k+2} phi_{k-1}
        sr.add((dk + 2.0) * std::sqrt(dk + 1.0) * mant(k + 1) * mant(k), scale(k + 1) + scale(k));
        if (k >= 1) {
            sr.add(-std::sqrt(dk * (dk + 1.0) * (dk + 2.0)) * mant(k + 2) * mant(k - 1),
                   scale(k + 2) + scale(k - 1));
        }
        if (orders.count(k)) {
            const SignedLog fact{log_factorial(k), 1};
            PrtTriple tr;
            tr.p = fact * sp.total();
            tr.r = fact * sr.total() * 0.5;
            tr.t = fact * st.total();
            bundle.orders[k] = tr;
        }
    }
    return bundle;
}

// Independent bottom-up path: P_m = m P_{m-1} + A_m etc., with A_m, B_m built
// from raw Hermite values at z/sqrt(tau) in signed-log arithmetic. Note the
// increment for R is the k=m summand of the defining sum,
// B_m = (tau^{m+1/2}/2)[(m+2)He_{m+1}He_m - m He_{m+2}He_{m-1}].
inline PrtBundle prt_recurrence_path(const EnsembleParams& params, double z, int m_max) {
    if (m_max < -1) throw std::domain_error("prt: orders must be >= -1");
    if (!(params.tau > 0.0)) throw std::domain_error("prt_recurrence_path: tau must be > 0");
    if (params.tau == 1.0) {
        throw unsupported_error("prt_recurrence_path: tau = 1 is degenerate");
    }
    PrtBundle bundle;
    bundle.z = z;
    bundle.orders[-1] = {};
    if (m_max < 0) return bundle;

    const double log_tau = std::log(params.tau);
    const auto he = hermite_sequence(z / std::sqrt(params.tau), m_max + 2);

    PrtTriple curr;
    curr.p = SignedLog::from(1.0);
    curr.r = SignedLog::from(z);
    curr.t = SignedLog::zero();
    bundle.orders[0] = curr;
    for (int m = 1; m <= m_max; ++m) {
        const double dm = static_cast<double>(m);
        const SignedLog tau_m{dm * log_tau, 1};
        const SignedLog tau_mh{(dm + 0.5) * log_tau, 1};
        const SignedLog a = tau_m * ((dm + 1.0) * (he[m] * he[m]) - dm * (he[m + 1] * he[m - 1]));
        const SignedLog b =
            tau_mh * 0.5 * ((dm + 2.0) * (he[m + 1] * he[m]) - dm * (he[m + 2] * he[m - 1]));
        PrtTriple next;
        next.p = dm * curr.p + a;
        next.r = dm * curr.r + b;
        next.t = dm * curr.t + dm * a;
        bundle.orders[m] = next;
        curr = next;
    }
    return bundle;
}

// Relative residual of
//   P_N - P_{N-1}(1+tau-z^2) - (N-1)(2 tau^2 + N-1) P_{N-2}
//       - 2 z R_{N-1} + (1-tau^2)(N-1) T_{N-2} = 0,
// normalized by the largest |summand|. Mathematically zero for all inputs.
inline double identity_residual(const EnsembleParams& params, double z) {
    if (params.n < 3) throw std::domain_error("identity_residual: n must be >= 3");
    const int n = params.n;
    const double tau = params.tau;
    const PrtBundle b = prt_eval(params, z, {n - 3, n - 2, n - 1, n});

    ScaledKahanSum sum;
    sum.add(b.at(n).p);
    sum.add(SignedLog::from(-(1.0 + tau - z * z)) * b.at(n - 1).p);
    sum.add(SignedLog::from(-(n - 1.0) * (2.0 * tau * tau + n - 1.0)) * b.at(n - 2).p);
    sum.add(SignedLog::from(-2.0 * z) * b.at(n - 1).r);
    sum.add(SignedLog::from((1.0 - tau * tau) * (n - 1.0)) * b.at(n - 2).t);

    const SignedLog total = sum.total();
    if (total.is_zero()) return 0.0;
    return std::exp(total.log_abs - sum.max_term_log());
}

}  // namespace elk
