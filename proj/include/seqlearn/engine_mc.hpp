#pragma once

#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <thread>
#include <vector>

#include "seqlearn/belief_update.hpp"
#include "seqlearn/config.hpp"
#include "seqlearn/engine_exact.hpp"
#include "seqlearn/metrics.hpp"
#include "seqlearn/rng.hpp"

namespace seqlearn {

struct PeriodRecord {
    double nu = 0.5;
    double tau = 0.0;
    double c = 0.5;
    double q = 0.5;
    Action a = Action::High;
    Action b = Action::High;  // presignal action
    double pi = 0.5;
    double llr = 0.0;
};

struct Trajectory {
    State state = State::High;
    std::uint64_t seed = 0;
    std::uint64_t replication = 0;
    std::vector<PeriodRecord> records;
};

// One seeded trajectory. The stream is keyed by (master seed, replication),
// so replications are independent of worker scheduling. Draw order per
// period is fixed: one disclosure uniform, then one signal uniform.
inline Trajectory mc_run(const ExperimentConfig& cfg,
                         std::uint64_t replication,
                         std::optional<State> forced_state = std::nullopt) {
    const SignalModel model(cfg.distribution.alpha);
    SplitStream stream(cfg.seed, replication);
    Trajectory traj;
    traj.seed = cfg.seed;
    traj.replication = replication;
    const double u_state = stream.next_uniform();
    traj.state = u_state < 0.5 ? State::High : State::Low;
    if (forced_state) traj.state = *forced_state;
    traj.records.reserve(cfg.engine.horizon);

    const bool lastk = std::holds_alternative<LastKDisclosure>(cfg.disclosure);
    std::optional<LastKPosteriors> filter;
    std::size_t window = 0;  // realized last-k actions, bit-encoded
    if (lastk) filter.emplace(cfg, model);

    double llr = 0.0;
    for (std::size_t t = 1; t <= cfg.engine.horizon; ++t) {
        PeriodRecord rec;
        rec.llr = llr;
        rec.pi = prob_from_llr(llr);
        const double u_disclose = stream.next_uniform();
        const double u_signal = stream.next_uniform();
        double nu_llr;
        if (lastk) {
            const auto tv = filter->view(window & filter->current_mask());
            rec.nu = tv.nu;
            nu_llr = tv.nu_llr;
        } else {
            rec.nu = disclose(cfg.disclosure, rec.pi, t, std::nullopt,
                              u_disclose);
            // Full / stochastic reveals pass the planner LLR through exactly.
            nu_llr = rec.nu == rec.pi ? llr
                                      : std::log(rec.nu / (1.0 - rec.nu));
        }
        rec.tau = transfer(cfg.transfers, rec.nu, t);
        CutoffPair cut = cutoff_pair(nu_llr, rec.tau);
        if (cfg.dictated_cutoffs) {
            cut.c = cfg.dictated_cutoffs->at(t);
            cut.cbar = 1.0 - cut.c;
        }
        rec.c = cut.c;
        rec.q = model.sample_private_belief(traj.state, u_signal);
        rec.a = rec.q >= cut.c ? Action::High : Action::Low;
        rec.b = detail::presignal_high(nu_llr, rec.tau) ? Action::High
                                                        : Action::Low;
        const auto inc = llr_increments(model, cut.c, cut.cbar);
        llr += rec.a == Action::High ? inc.u_high : inc.u_low;
        traj.records.push_back(rec);
        if (lastk) {
            window = (window << 1) | (rec.a == Action::High ? 1u : 0u);
            filter->advance();
        }
    }
    return traj;
}

struct McSeries {
    std::vector<PeriodMetrics> series;
    std::vector<double> se_mistake_agent;  // binomial standard errors
    std::size_t replications = 0;
};

namespace detail {

struct McAccumulator {
    std::vector<double> mistakes, presignal_mistakes, planner_mistakes,
        abs_llr, abs_transfer;

    explicit McAccumulator(std::size_t horizon)
        : mistakes(horizon, 0.0),
          presignal_mistakes(horizon, 0.0),
          planner_mistakes(horizon, 0.0),
          abs_llr(horizon, 0.0),
          abs_transfer(horizon, 0.0) {}

    void add(const Trajectory& traj) {
        const auto wrong = traj.state == State::High ? Action::Low
                                                     : Action::High;
        for (std::size_t i = 0; i < traj.records.size(); ++i) {
            const auto& rec = traj.records[i];
            if (rec.a == wrong) mistakes[i] += 1.0;
            if (rec.b == wrong) presignal_mistakes[i] += 1.0;
            planner_mistakes[i] += std::min(rec.pi, 1.0 - rec.pi);
            abs_llr[i] += std::abs(rec.llr);
            abs_transfer[i] += std::abs(rec.tau);
        }
    }

    void merge(const McAccumulator& other) {
        for (std::size_t i = 0; i < mistakes.size(); ++i) {
            mistakes[i] += other.mistakes[i];
            presignal_mistakes[i] += other.presignal_mistakes[i];
            planner_mistakes[i] += other.planner_mistakes[i];
            abs_llr[i] += other.abs_llr[i];
            abs_transfer[i] += other.abs_transfer[i];
        }
    }
};

}  // namespace detail

inline std::size_t worker_count() {
    if (const char* env = std::getenv("SEQLEARN_WORKERS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<std::size_t>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Averages R seeded replications. Replications are reduced in fixed chunks
// of 1024 so the result is bit-identical for any worker count.
inline McSeries mc_aggregate(const ExperimentConfig& cfg) {
    validate(cfg);
    const std::size_t horizon = cfg.engine.horizon;
    const std::size_t reps = cfg.engine.replications;
    constexpr std::size_t kChunk = 1024;
    const std::size_t chunks = (reps + kChunk - 1) / kChunk;
    std::vector<detail::McAccumulator> partials(
        chunks, detail::McAccumulator(horizon));

    const std::size_t workers = std::min(worker_count(), chunks);
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next_chunk{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t chunk = next_chunk.fetch_add(1);
            if (chunk >= chunks) return;
            const std::size_t lo = chunk * kChunk;
            const std::size_t hi = std::min(reps, lo + kChunk);
            for (std::size_t r = lo; r < hi; ++r) {
                partials[chunk].add(mc_run(cfg, r));
            }
        }
    };
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();

    detail::McAccumulator total(horizon);
    for (const auto& partial : partials) total.merge(partial);

    McSeries out;
    out.replications = reps;
    out.series.resize(horizon);
    out.se_mistake_agent.resize(horizon);
    const double n = static_cast<double>(reps);
    double cum_mistakes = 0.0;
    double cum_transfers = 0.0;
    for (std::size_t i = 0; i < horizon; ++i) {
        PeriodMetrics& m = out.series[i];
        m.t = i + 1;
        m.p_mistake_agent = total.mistakes[i] / n;
        m.p_mistake_presignal = total.presignal_mistakes[i] / n;
        m.p_mistake_planner = total.planner_mistakes[i] / n;
        m.e_abs_llr = total.abs_llr[i] / n;
        m.e_abs_transfer = total.abs_transfer[i] / n;
        cum_mistakes += m.p_mistake_agent;
        cum_transfers += m.e_abs_transfer;
        m.cum_mistakes = cum_mistakes;
        m.cum_transfers = cum_transfers;
        out.se_mistake_agent[i] = std::sqrt(
            m.p_mistake_agent * (1.0 - m.p_mistake_agent) / n);
    }
    return out;
}

}  // namespace seqlearn
