#pragma once

#include <cmath>

#include "winter/errors.hpp"

namespace winter {

// Geometry of the shell: Dirichlet wall at x=0, point interaction of strength
// alpha at x=a>0.  alpha has units 1/length.
struct ModelParams {
    double a = 1.0;
    double alpha = 0.0;

    void validate() const {
        if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("ModelParams: a must be positive and finite");
        if (!std::isfinite(alpha)) throw DomainError("ModelParams: alpha must be finite");
    }
};

// Power nonlinearity eta*|psi|^{2 sigma} psi.  sigma is any positive real here;
// the stationary module additionally restricts itself to sigma = 1.
struct Nonlinearity {
    double eta = 0.0;
    double sigma = 1.0;

    void validate() const {
        if (!std::isfinite(eta)) throw DomainError("Nonlinearity: eta must be finite");
        if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("Nonlinearity: sigma must be positive");
    }
};

}  // namespace winter
