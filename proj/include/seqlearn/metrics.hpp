#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "seqlearn/belief_update.hpp"
#include "seqlearn/measure.hpp"
#include "seqlearn/policy.hpp"
#include "seqlearn/signal_model.hpp"

namespace seqlearn {

struct PeriodMetrics {
    std::size_t t = 0;
    double p_mistake_agent = 0.0;      // P[a_t != theta]
    double p_mistake_planner = 0.0;    // E[min{pi_t, 1-pi_t}]
    double p_mistake_presignal = 0.0;  // P[b_t != theta]
    double e_abs_llr = 0.0;            // E|l_t|
    double e_abs_transfer = 0.0;       // E|tau_t|
    double cum_mistakes = 0.0;
    double cum_transfers = 0.0;
};

// Fixed column order of the metrics CSV.
inline const char* metrics_csv_header() {
    return "t,p_mistake_agent,p_mistake_planner,p_mistake_presignal,"
           "e_abs_llr,e_abs_transfer,cum_mistakes,cum_transfers";
}

namespace detail {

// Presignal action in LLR coordinates: high iff odds(nu) >= (1-tau)/(1+tau).
inline bool presignal_high(double nu_llr, double tau) {
    return nu_llr >= std::log((1.0 - tau) / (1.0 + tau));
}

}  // namespace detail

// Per-period statistics aggregated bin by bin over the conditional measure,
// before the action of period t is absorbed.
inline PeriodMetrics period_metrics_from_measure(
    const ConditionalBeliefMeasure& measure, const DisclosurePolicy& policy,
    const TransferScheme& scheme,
    const std::optional<DictatedCutoffSchedule>& dictated,
    const SignalModel& model, std::size_t t) {
    PeriodMetrics out;
    out.t = t;
    for (std::size_t i = 0; i < measure.node_count(); ++i) {
        const double w_h = measure.mass_high(i);
        const double w_l = measure.mass_low(i);
        if (w_h + w_l == 0.0) continue;
        const double llr = measure.node_llr(i);
        const double pi = prob_from_llr(llr);
        const double w_both = 0.5 * (w_h + w_l);
        out.p_mistake_planner += w_both * prob_from_llr(-std::abs(llr));
        out.e_abs_llr += w_both * std::abs(llr);
        for (const auto& branch : disclosure_branches_llr(policy, pi, llr, t)) {
            const double nu = prob_from_llr(branch.nu_llr);
            const double tau = transfer(scheme, nu, t);
            CutoffPair cut = cutoff_pair(branch.nu_llr, tau);
            if (dictated) {
                cut.c = dictated->at(t);
                cut.cbar = 1.0 - cut.c;
                cut.floored = false;
            }
            const auto probs = action_probabilities(model, cut.c, cut.cbar);
            out.p_mistake_agent +=
                branch.weight * 0.5 *
                (w_h * probs.low_given_high + w_l * probs.high_given_low);
            if (detail::presignal_high(branch.nu_llr, tau)) {
                out.p_mistake_presignal += branch.weight * 0.5 * w_l;
            } else {
                out.p_mistake_presignal += branch.weight * 0.5 * w_h;
            }
            out.e_abs_transfer += branch.weight * w_both * std::abs(tau);
        }
    }
    return out;
}

// E[Delta(pi_t, nu_t)] with
//   Delta = f (|l + U^l| - |l|) + (1-f) (|l + U^h| - |l|),
//   f = pi F_h(c) + (1-pi) F_l(c),
// where pi at a node is the measure-implied belief (the mass ratio), so the
// decomposition matches the realized increment of E|l_t| identically.
inline double delta_decomposition(
    const ConditionalBeliefMeasure& measure, const DisclosurePolicy& policy,
    const TransferScheme& scheme,
    const std::optional<DictatedCutoffSchedule>& dictated,
    const SignalModel& model, std::size_t t) {
    double acc = 0.0;
    for (std::size_t i = 0; i < measure.node_count(); ++i) {
        const double w_h = measure.mass_high(i);
        const double w_l = measure.mass_low(i);
        if (w_h + w_l == 0.0) continue;
        const double llr = measure.node_llr(i);
        const double pi_prob = prob_from_llr(llr);
        // Divide by the raw total: halving first can underflow to zero when
        // a node carries a single denormal.
        const double pi_node = w_h / (w_h + w_l);
        const double w_both = 0.5 * (w_h + w_l);
        for (const auto& branch :
             disclosure_branches_llr(policy, pi_prob, llr, t)) {
            const double nu = prob_from_llr(branch.nu_llr);
            const double tau = transfer(scheme, nu, t);
            CutoffPair cut = cutoff_pair(branch.nu_llr, tau);
            if (dictated) {
                cut.c = dictated->at(t);
                cut.cbar = 1.0 - cut.c;
            }
            const double f_low =
                pi_node * model.cdf_conditional(State::High, cut.c) +
                (1.0 - pi_node) * model.cdf_conditional(State::Low, cut.c);
            const auto inc = llr_increments(model, cut.c, cut.cbar);
            const double d_low = std::abs(llr + inc.u_low) - std::abs(llr);
            const double d_high = std::abs(llr + inc.u_high) - std::abs(llr);
            acc += branch.weight * w_both *
                   (f_low * d_low + (1.0 - f_low) * d_high);
        }
    }
    return acc;
}

// ------------------------- efficiency diagnostics --------------------------

enum class Convergence { Plateauing, LogGrowth, PowerGrowth };

inline const char* convergence_name(Convergence c) {
    switch (c) {
        case Convergence::Plateauing: return "plateauing";
        case Convergence::LogGrowth: return "log-growth";
        default: return "power-growth";
    }
}

struct EfficiencyReport {
    double cum_mistakes = 0.0;
    double tail_increment = 0.0;  // per-period growth of cum_mistakes
    double slope = 0.0;           // log-log slope of p_mistake_agent vs t
    double slope_stderr = 0.0;
    Convergence classification = Convergence::PowerGrowth;
};

// Fits the tail window [T/10, T]. Classification heuristics (not theorems):
// log-growth of cum_mistakes when the per-period slope is near -1; otherwise
// plateauing when the tail increment drops below 1e-4 per period; otherwise
// power-growth. The slope band is tested first because a 1/t tail can have a
// per-period increment below any fixed threshold once the horizon is long
// enough, while a genuinely plateauing series decays faster than any power
// in the band.
inline EfficiencyReport efficiency_diagnostics(
    const std::vector<PeriodMetrics>& series) {
    if (series.size() < 100) {
        throw std::invalid_argument(
            "efficiency_diagnostics: need at least 100 periods");
    }
    EfficiencyReport report;
    const std::size_t horizon = series.size();
    const std::size_t window_start = horizon / 10;  // index of t = T/10
    report.cum_mistakes = series.back().cum_mistakes;
    const std::size_t tail_len = horizon - window_start;
    report.tail_increment =
        (series.back().cum_mistakes - series[window_start - 1].cum_mistakes) /
        static_cast<double>(tail_len);
    std::vector<double> log_t;
    std::vector<double> log_p;
    for (std::size_t i = window_start - 1; i < horizon; ++i) {
        if (series[i].p_mistake_agent <= 0.0) continue;
        log_t.push_back(std::log(static_cast<double>(series[i].t)));
        log_p.push_back(std::log(series[i].p_mistake_agent));
    }
    if (log_t.size() >= 3) {
        const OlsFit fit = ols_fit(log_t.begin(), log_t.end(), log_p.begin());
        report.slope = fit.slope;
        report.slope_stderr = fit.slope_stderr;
    }
    if (log_t.size() >= 3 && report.slope >= -1.3 && report.slope <= -0.7) {
        report.classification = Convergence::LogGrowth;
    } else if (report.tail_increment < 1e-4) {
        report.classification = Convergence::Plateauing;
    } else {
        report.classification = Convergence::PowerGrowth;
    }
    return report;
}

}  // namespace seqlearn
