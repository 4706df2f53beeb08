#pragma once

#include <stdexcept>

namespace elk {

// Matrix dimension N and asymmetry tau, the two knobs of every formula.
// tau = 0 is real Ginibre, tau = 1 is GOE (sampling only; the JDF degenerates
// there since every eigenvalue has kappa = 1).
struct EnsembleParams {
    int n;
    double tau;

    EnsembleParams(int n_, double tau_) : n(n_), tau(tau_) {
        if (n < 1) throw std::domain_error("EnsembleParams: n must be >= 1");
        if (!(tau >= 0.0 && tau <= 1.0)) throw std::domain_error("EnsembleParams: tau must be in [0,1]");
    }
};

}  // namespace elk
