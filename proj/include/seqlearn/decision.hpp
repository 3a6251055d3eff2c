#pragma once

#include <cmath>
#include <stdexcept>

#include "seqlearn/signal_model.hpp"

namespace seqlearn {

// Agent-side Bayesian layer. All beliefs are interior probabilities; the
// cutoff is computed in probability coordinates.

// p with odds(p) = odds(q) * odds(nu).
inline double posterior(double q, double nu) {
    if (!(q > 0.0 && q < 1.0) || !(nu > 0.0 && nu < 1.0)) {
        throw std::domain_error("posterior: beliefs must be interior");
    }
    const double odds = (q / (1.0 - q)) * (nu / (1.0 - nu));
    return odds / (1.0 + odds);
}

// Private-belief cutoff under social belief nu and transfer tau:
//   c = (1-nu)(1-tau) / [ nu(1+tau) + (1-nu)(1-tau) ].
// tau = 0 gives c = 1 - nu.
inline double cutoff(double nu, double tau) {
    if (!(nu > 0.0 && nu < 1.0)) {
        throw std::domain_error("cutoff: nu must be interior");
    }
    if (!(std::abs(tau) < 1.0)) {
        throw std::invalid_argument(
            "cutoff: |tau| >= 1 would make one action strictly dominant");
    }
    const double num = (1.0 - nu) * (1.0 - tau);
    return num / (nu * (1.0 + tau) + num);
}

// High iff q >= c(nu, tau); ties go to the high action.
inline Action decide(double q, double nu, double tau) {
    return q >= cutoff(nu, tau) ? Action::High : Action::Low;
}

// Action on social information alone: high iff odds(nu) >= (1-tau)/(1+tau).
inline Action presignal_action(double nu, double tau) {
    if (!(nu > 0.0 && nu < 1.0)) {
        throw std::domain_error("presignal_action: nu must be interior");
    }
    if (!(std::abs(tau) < 1.0)) {
        throw std::invalid_argument("presignal_action: |tau| >= 1");
    }
    return nu / (1.0 - nu) >= (1.0 - tau) / (1.0 + tau) ? Action::High
                                                        : Action::Low;
}

}  // namespace seqlearn
