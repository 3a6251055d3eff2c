#pragma once

#include <cmath>
#include <stdexcept>

#include "seqlearn/numerics.hpp"
#include "seqlearn/signal_model.hpp"

namespace seqlearn {

// Smallest cutoff passed to CDF evaluation; anything lower is floored and
// counted by the caller.
inline constexpr double kCutoffFloor = 3.139133301947331e-17;  // e^-38

// Cutoff and its complement, computed from the social belief in LLR
// coordinates so both ends stay representable at extreme beliefs:
//   c = (1-tau) / (r (1+tau) + (1-tau)),  r = e^{nu_llr}.
struct CutoffPair {
    double c = 0.5;       // cutoff
    double cbar = 0.5;    // 1 - c, computed without cancellation
    bool floored = false; // hit the evaluation floor on either side
};

inline CutoffPair cutoff_pair(double nu_llr, double tau) {
    if (!(std::abs(tau) < 1.0)) {
        throw std::invalid_argument("cutoff_pair: need |tau| < 1");
    }
    CutoffPair out;
    const double lo = 1.0 - tau;
    const double hi = 1.0 + tau;
    if (nu_llr >= 0.0) {
        const double rinv = std::exp(-nu_llr);  // (1-nu)/nu
        out.c = lo * rinv / (hi + lo * rinv);
        out.cbar = hi / (hi + lo * rinv);
    } else {
        const double r = std::exp(nu_llr);
        out.c = lo / (r * hi + lo);
        out.cbar = r * hi / (r * hi + lo);
    }
    if (out.c < kCutoffFloor) {
        out.c = kCutoffFloor;
        out.floored = true;
    }
    if (out.cbar < kCutoffFloor) {
        out.cbar = kCutoffFloor;
        out.floored = true;
    }
    return out;
}

// F_l(q) - F_h(q), evaluated from the always-positive-terms expression
//   D(q) = 2 F(q) (1 - 2q) + 4 int_0^q F     for q <= 1/2,
// extended by the symmetry D(q) = D(1-q).
inline double conditional_cdf_gap(const SignalModel& model, double q) {
    const double z = q <= 0.5 ? q : 1.0 - q;
    return 2.0 * model.cdf(z) * (1.0 - 2.0 * z) + 4.0 * model.cdf_integral(z);
}

struct LlrIncrements {
    double u_high = 0.0;  // > 0, added on a high action
    double u_low = 0.0;   // < 0, added on a low action
};

// U^h = log[(1-F_h(c)) / (1-F_l(c))], U^l = log[F_h(c) / F_l(c)].
// Survival ratios are taken through the conditional symmetry
// 1 - F_h(c) = F_l(1-c), so both increments reduce to
// log1p(gap / F_h) evaluated at c or its complement.
inline LlrIncrements llr_increments(const SignalModel& model, double c,
                                    double cbar) {
    LlrIncrements out;
    out.u_high =
        std::log1p(conditional_cdf_gap(model, cbar) /
                   model.cdf_conditional(State::High, cbar));
    out.u_low = -std::log1p(conditional_cdf_gap(model, c) /
                            model.cdf_conditional(State::High, c));
    return out;
}

inline LlrIncrements llr_increments(const SignalModel& model, double c) {
    if (!(c > 0.0 && c < 1.0)) {
        throw std::domain_error("llr_increments: cutoff must be interior");
    }
    return llr_increments(model, c, 1.0 - c);
}

// Posterior after observing one action; odds multiply by e^{U^a}.
inline double update_planner_belief(double pi, Action action,
                                    const LlrIncrements& inc) {
    if (!(pi > 0.0 && pi < 1.0)) {
        throw std::domain_error("update_planner_belief: pi must be interior");
    }
    const double llr = llr_from_prob(pi) +
                       (action == Action::High ? inc.u_high : inc.u_low);
    return prob_from_llr(llr);
}

// Action probabilities conditional on each state, with survivals evaluated
// via the symmetric complement.
struct ActionProbabilities {
    double low_given_high = 0.0;   // F_h(c)
    double low_given_low = 0.0;    // F_l(c)
    double high_given_high = 0.0;  // 1 - F_h(c) = F_l(1-c)
    double high_given_low = 0.0;   // 1 - F_l(c) = F_h(1-c)
};

inline ActionProbabilities action_probabilities(const SignalModel& model,
                                                double c, double cbar) {
    ActionProbabilities out;
    out.low_given_high = model.cdf_conditional(State::High, c);
    out.low_given_low = model.cdf_conditional(State::Low, c);
    out.high_given_high = model.cdf_conditional(State::Low, cbar);
    out.high_given_low = model.cdf_conditional(State::High, cbar);
    return out;
}

}  // namespace seqlearn
