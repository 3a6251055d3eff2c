#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "seqlearn/belief_update.hpp"
#include "seqlearn/config.hpp"
#include "seqlearn/measure.hpp"
#include "seqlearn/metrics.hpp"
#include "seqlearn/policy.hpp"

namespace seqlearn {

struct ExactResult {
    std::vector<PeriodMetrics> series;
    double leakage = 0.0;           // cumulative mass absorbed at the clamp
    std::size_t floor_events = 0;   // cutoffs floored at e^-38
};

// Observer invoked with the measure of period t before its action step.
using MeasureObserver =
    std::function<void(std::size_t t, const ConditionalBeliefMeasure&)>;

namespace detail {

inline void check_and_renormalize(std::vector<double>& mass,
                                  std::size_t t, const char* which) {
    double total = 0.0;
    for (double m : mass) total += m;
    if (std::abs(total - 1.0) > 1e-9) {
        std::ostringstream os;
        os << "exact engine: mass_" << which << " drifted to " << total
           << " at t=" << t;
        throw std::runtime_error(os.str());
    }
    for (double& m : mass) m /= total;
}

}  // namespace detail

// Evolves the conditional LLR measures one period: every node splits, per
// disclosure branch, into the two post-action destinations.
inline void exact_step(ConditionalBeliefMeasure& measure,
                       const DisclosurePolicy& policy,
                       const TransferScheme& scheme,
                       const std::optional<DictatedCutoffSchedule>& dictated,
                       const SignalModel& model, std::size_t t,
                       double& leakage, std::size_t& floor_events) {
    std::vector<double> next_high(measure.node_count(), 0.0);
    std::vector<double> next_low(measure.node_count(), 0.0);
    for (std::size_t i = 0; i < measure.node_count(); ++i) {
        const double w_h = measure.mass_high(i);
        const double w_l = measure.mass_low(i);
        if (w_h + w_l == 0.0) continue;
        const double llr = measure.node_llr(i);
        const double pi = prob_from_llr(llr);
        for (const auto& branch : disclosure_branches_llr(policy, pi, llr, t)) {
            const double nu = prob_from_llr(branch.nu_llr);
            const double tau = transfer(scheme, nu, t);
            CutoffPair cut = cutoff_pair(branch.nu_llr, tau);
            if (dictated) {
                cut.c = dictated->at(t);
                cut.cbar = 1.0 - cut.c;
                cut.floored = false;
            }
            if (cut.floored) ++floor_events;
            const auto probs = action_probabilities(model, cut.c, cut.cbar);
            const auto inc = llr_increments(model, cut.c, cut.cbar);
            const double dest_high = llr + inc.u_high;
            const double dest_low = llr + inc.u_low;
            leakage += measure.deposit(next_high, dest_high,
                                       branch.weight * w_h *
                                           probs.high_given_high);
            leakage += measure.deposit(next_high, dest_low,
                                       branch.weight * w_h *
                                           probs.low_given_high);
            leakage += measure.deposit(next_low, dest_high,
                                       branch.weight * w_l *
                                           probs.high_given_low);
            leakage += measure.deposit(next_low, dest_low,
                                       branch.weight * w_l *
                                           probs.low_given_low);
        }
    }
    detail::check_and_renormalize(next_high, t, "h");
    detail::check_and_renormalize(next_low, t, "l");
    measure.mass_high() = std::move(next_high);
    measure.mass_low() = std::move(next_low);
    if (leakage > 1e-6) {
        std::ostringstream os;
        os << "exact engine: cumulative clamp leakage " << leakage
           << " exceeds 1e-6 at t=" << t
           << " (clamp L=" << measure.clamp() << ")";
        throw std::runtime_error(os.str());
    }
}

inline ExactResult exact_evolve(const ExperimentConfig& cfg,
                                const MeasureObserver& observer = {}) {
    validate(cfg);
    if (std::holds_alternative<LastKDisclosure>(cfg.disclosure)) {
        throw std::invalid_argument(
            "exact_evolve: LastK configs are handled by lastk_evolve");
    }
    const SignalModel model(cfg.distribution.alpha);
    ConditionalBeliefMeasure measure(cfg.engine.grid_bins,
                                     cfg.engine.llr_clamp);
    ExactResult result;
    result.series.reserve(cfg.engine.horizon);
    double cum_mistakes = 0.0;
    double cum_transfers = 0.0;
    for (std::size_t t = 1; t <= cfg.engine.horizon; ++t) {
        if (observer) observer(t, measure);
        PeriodMetrics metrics = period_metrics_from_measure(
            measure, cfg.disclosure, cfg.transfers, cfg.dictated_cutoffs,
            model, t);
        cum_mistakes += metrics.p_mistake_agent;
        cum_transfers += metrics.e_abs_transfer;
        metrics.cum_mistakes = cum_mistakes;
        metrics.cum_transfers = cum_transfers;
        result.series.push_back(metrics);
        exact_step(measure, cfg.disclosure, cfg.transfers,
                   cfg.dictated_cutoffs, model, t, result.leakage,
                   result.floor_events);
    }
    return result;
}

// ------------------------------ last-k engine ------------------------------

// Forward filter over (last-k action tuple, planner LLR). Actions are
// k-order Markov given the tuple posteriors, and the planner LLR advances by
// tuple-determined increments, so the joint evolution is exact up to the
// grid. Tuples are bit-encoded, most recent action in the lowest bit
// (1 = high); during the first k periods the tuple length grows with t.
inline ExactResult lastk_evolve(const ExperimentConfig& cfg) {
    validate(cfg);
    const auto* lk = std::get_if<LastKDisclosure>(&cfg.disclosure);
    if (lk == nullptr) {
        throw std::invalid_argument("lastk_evolve: disclosure must be last_k");
    }
    const int k = lk->k;
    const SignalModel model(cfg.distribution.alpha);
    const ConditionalBeliefMeasure grid(cfg.engine.grid_bins,
                                        cfg.engine.llr_clamp);
    const std::size_t nodes = grid.node_count();

    // mass[state][tuple][node]; tuple length grows until it reaches k.
    std::vector<std::vector<double>> mass_high(1,
                                               std::vector<double>(nodes, 0.0));
    std::vector<std::vector<double>> mass_low = mass_high;
    mass_high[0][nodes / 2] = 1.0;
    mass_low[0][nodes / 2] = 1.0;

    ExactResult result;
    result.series.reserve(cfg.engine.horizon);
    double cum_mistakes = 0.0;
    double cum_transfers = 0.0;
    for (std::size_t t = 1; t <= cfg.engine.horizon; ++t) {
        const std::size_t tuples = mass_high.size();
        const int next_len =
            static_cast<int>(std::min<std::size_t>(k, t));
        const std::size_t next_tuples = std::size_t{1} << next_len;
        std::vector<std::vector<double>> next_high(
            next_tuples, std::vector<double>(nodes, 0.0));
        std::vector<std::vector<double>> next_low = next_high;
        const std::size_t next_mask = next_tuples - 1;

        PeriodMetrics metrics;
        metrics.t = t;
        for (std::size_t tup = 0; tup < tuples; ++tup) {
            double p_h = 0.0, p_l = 0.0;
            for (std::size_t i = 0; i < nodes; ++i) {
                p_h += mass_high[tup][i];
                p_l += mass_low[tup][i];
            }
            if (p_h + p_l == 0.0) continue;
            // Bayes posterior of the tuple under the uniform prior.
            const double nu_llr = std::log(p_h / p_l);
            const double nu = prob_from_llr(nu_llr);
            const double tau = transfer(cfg.transfers, nu, t);
            CutoffPair cut = cutoff_pair(nu_llr, tau);
            if (cfg.dictated_cutoffs) {
                cut.c = cfg.dictated_cutoffs->at(t);
                cut.cbar = 1.0 - cut.c;
                cut.floored = false;
            }
            if (cut.floored) ++result.floor_events;
            const auto probs = action_probabilities(model, cut.c, cut.cbar);
            const auto inc = llr_increments(model, cut.c, cut.cbar);
            const bool b_high = detail::presignal_high(nu_llr, tau);

            metrics.p_mistake_agent +=
                0.5 * (p_h * probs.low_given_high + p_l * probs.high_given_low);
            metrics.p_mistake_presignal += 0.5 * (b_high ? p_l : p_h);
            metrics.e_abs_transfer += 0.5 * (p_h + p_l) * std::abs(tau);

            const std::size_t tup_high = ((tup << 1) | 1u) & next_mask;
            const std::size_t tup_low = (tup << 1) & next_mask;
            for (std::size_t i = 0; i < nodes; ++i) {
                const double w_h = mass_high[tup][i];
                const double w_l = mass_low[tup][i];
                if (w_h + w_l == 0.0) continue;
                const double llr = grid.node_llr(i);
                metrics.p_mistake_planner +=
                    0.5 * (w_h + w_l) * prob_from_llr(-std::abs(llr));
                metrics.e_abs_llr += 0.5 * (w_h + w_l) * std::abs(llr);
                const double dest_high = llr + inc.u_high;
                const double dest_low = llr + inc.u_low;
                result.leakage += grid.deposit(next_high[tup_high], dest_high,
                                               w_h * probs.high_given_high);
                result.leakage += grid.deposit(next_high[tup_low], dest_low,
                                               w_h * probs.low_given_high);
                result.leakage += grid.deposit(next_low[tup_high], dest_high,
                                               w_l * probs.high_given_low);
                result.leakage += grid.deposit(next_low[tup_low], dest_low,
                                               w_l * probs.low_given_low);
            }
        }
        cum_mistakes += metrics.p_mistake_agent;
        cum_transfers += metrics.e_abs_transfer;
        metrics.cum_mistakes = cum_mistakes;
        metrics.cum_transfers = cum_transfers;
        result.series.push_back(metrics);
        mass_high = std::move(next_high);
        mass_low = std::move(next_low);
        if (result.leakage > 1e-6) {
            std::ostringstream os;
            os << "last-k engine: cumulative clamp leakage " << result.leakage
               << " exceeds 1e-6 at t=" << t;
            throw std::runtime_error(os.str());
        }
    }
    return result;
}

// Per-tuple Bayes posteriors of the last-k action process by period,
// tuple-marginal only (no LLR grid). Used by the Monte Carlo engine to price
// the disclosed tuple.
class LastKPosteriors {
  public:
    LastKPosteriors(const ExperimentConfig& cfg, const SignalModel& model)
        : cfg_(cfg), model_(model), k_(std::get<LastKDisclosure>(cfg.disclosure).k) {
        prob_high_ = {1.0};
        prob_low_ = {1.0};
        t_ = 1;
    }

    // nu for the tuple disclosed to agent t_, then advance the filter.
    struct TupleView {
        double nu = 0.5;
        double nu_llr = 0.0;
    };

    TupleView view(std::size_t tuple) const {
        TupleView out;
        const double p_h = prob_high_[tuple];
        const double p_l = prob_low_[tuple];
        out.nu_llr = std::log(p_h / p_l);
        out.nu = prob_from_llr(out.nu_llr);
        return out;
    }

    std::size_t current_mask() const { return prob_high_.size() - 1; }

    void advance() {
        const std::size_t tuples = prob_high_.size();
        const int next_len = static_cast<int>(std::min<std::size_t>(k_, t_));
        const std::size_t next_tuples = std::size_t{1} << next_len;
        const std::size_t next_mask = next_tuples - 1;
        std::vector<double> next_high(next_tuples, 0.0);
        std::vector<double> next_low(next_tuples, 0.0);
        for (std::size_t tup = 0; tup < tuples; ++tup) {
            const double p_h = prob_high_[tup];
            const double p_l = prob_low_[tup];
            if (p_h + p_l == 0.0) continue;
            const auto tv = view(tup);
            const double tau = transfer(cfg_.transfers, tv.nu, t_);
            CutoffPair cut = cutoff_pair(tv.nu_llr, tau);
            if (cfg_.dictated_cutoffs) {
                cut.c = cfg_.dictated_cutoffs->at(t_);
                cut.cbar = 1.0 - cut.c;
            }
            const auto probs = action_probabilities(model_, cut.c, cut.cbar);
            const std::size_t tup_high = ((tup << 1) | 1u) & next_mask;
            const std::size_t tup_low = (tup << 1) & next_mask;
            next_high[tup_high] += p_h * probs.high_given_high;
            next_high[tup_low] += p_h * probs.low_given_high;
            next_low[tup_high] += p_l * probs.high_given_low;
            next_low[tup_low] += p_l * probs.low_given_low;
        }
        prob_high_ = std::move(next_high);
        prob_low_ = std::move(next_low);
        ++t_;
    }

  private:
    const ExperimentConfig& cfg_;
    const SignalModel& model_;
    int k_;
    std::size_t t_ = 1;
    std::vector<double> prob_high_;
    std::vector<double> prob_low_;
};

}  // namespace seqlearn
