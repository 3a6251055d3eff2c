#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

namespace seqlearn {

// ---------------------------------------------------------------------------
// Disclosure policies: map the planner belief pi_t to the induced social
// belief nu_t. Every kind is a mean-preserving contraction of pi_t.
// ---------------------------------------------------------------------------

struct FullDisclosure {};
struct NoDisclosure {};

struct LastKDisclosure {
    int k = 1;
};

// With probability eps reveal pi, otherwise disclose nothing (nu = 1/2).
// eps may be a per-period schedule (last entry repeats) or a table over
// pi-intervals.
struct StochasticDisclosure {
    std::vector<double> schedule;  // eps by period, 1-based; last repeats
    struct PiBand {
        double lo = 0.0;
        double hi = 1.0;
        double eps = 0.0;
    };
    std::vector<PiBand> pi_bands;  // optional; overrides the schedule

    double epsilon(std::size_t t, double pi) const {
        if (!pi_bands.empty()) {
            for (const auto& band : pi_bands) {
                if (pi >= band.lo && pi <= band.hi) return band.eps;
            }
            throw std::invalid_argument(
                "StochasticDisclosure: pi outside every pi_band");
        }
        if (schedule.empty()) {
            throw std::invalid_argument(
                "StochasticDisclosure: empty epsilon schedule");
        }
        const std::size_t idx = t <= schedule.size() ? t - 1 : schedule.size() - 1;
        return schedule[idx];
    }
};

// Two-point garbling: pi in [lo, hi] maps to {lo, hi} with probabilities
// chosen so E[nu] = pi; pi outside the band passes through.
struct BinarySplitDisclosure {
    double lo = 0.25;
    double hi = 0.75;
};

using DisclosurePolicy =
    std::variant<FullDisclosure, NoDisclosure, LastKDisclosure,
                 StochasticDisclosure, BinarySplitDisclosure>;

inline void validate(const DisclosurePolicy& policy) {
    if (const auto* lk = std::get_if<LastKDisclosure>(&policy)) {
        if (lk->k < 1 || lk->k > 12) {
            throw std::invalid_argument("LastKDisclosure: k must be in [1,12]");
        }
    } else if (const auto* st = std::get_if<StochasticDisclosure>(&policy)) {
        if (st->schedule.empty() && st->pi_bands.empty()) {
            throw std::invalid_argument(
                "StochasticDisclosure: need a schedule or pi_bands");
        }
        for (double e : st->schedule) {
            if (!(e >= 0.0 && e <= 1.0)) {
                throw std::invalid_argument(
                    "StochasticDisclosure: eps must lie in [0,1]");
            }
        }
        for (const auto& band : st->pi_bands) {
            if (!(band.lo <= band.hi) || !(band.eps >= 0.0 && band.eps <= 1.0)) {
                throw std::invalid_argument(
                    "StochasticDisclosure: malformed pi_band");
            }
        }
    } else if (const auto* bs = std::get_if<BinarySplitDisclosure>(&policy)) {
        if (!(bs->lo > 0.0 && bs->lo < bs->hi && bs->hi < 1.0)) {
            throw std::invalid_argument(
                "BinarySplitDisclosure: need 0 < lo < hi < 1");
        }
    }
}

// The exact engine evolves all disclosure randomness in distribution; a
// policy realizes as a weighted set of nu values per planner belief.
struct DisclosureBranch {
    double weight = 1.0;
    double nu = 0.5;
};

inline std::vector<DisclosureBranch> disclosure_branches(
    const DisclosurePolicy& policy, double pi, std::size_t t) {
    if (std::holds_alternative<FullDisclosure>(policy)) {
        return {{1.0, pi}};
    }
    if (std::holds_alternative<NoDisclosure>(policy)) {
        return {{1.0, 0.5}};
    }
    if (const auto* st = std::get_if<StochasticDisclosure>(&policy)) {
        const double eps = st->epsilon(t, pi);
        if (eps >= 1.0) return {{1.0, pi}};
        if (eps <= 0.0) return {{1.0, 0.5}};
        return {{eps, pi}, {1.0 - eps, 0.5}};
    }
    if (const auto* bs = std::get_if<BinarySplitDisclosure>(&policy)) {
        if (pi < bs->lo || pi > bs->hi) return {{1.0, pi}};
        const double w_hi = (pi - bs->lo) / (bs->hi - bs->lo);
        std::vector<DisclosureBranch> out;
        if (w_hi > 0.0) out.push_back({w_hi, bs->hi});
        if (w_hi < 1.0) out.push_back({1.0 - w_hi, bs->lo});
        return out;
    }
    throw std::logic_error(
        "disclosure_branches: LastK is evolved by the last-k engine");
}

// Same enumeration with nu carried in LLR coordinates, so extreme planner
// beliefs never round to 0 or 1. pi and pi_llr describe the same belief.
struct DisclosureBranchLlr {
    double weight = 1.0;
    double nu_llr = 0.0;
};

inline std::vector<DisclosureBranchLlr> disclosure_branches_llr(
    const DisclosurePolicy& policy, double pi, double pi_llr, std::size_t t) {
    if (std::holds_alternative<FullDisclosure>(policy)) {
        return {{1.0, pi_llr}};
    }
    if (std::holds_alternative<NoDisclosure>(policy)) {
        return {{1.0, 0.0}};
    }
    if (const auto* st = std::get_if<StochasticDisclosure>(&policy)) {
        const double eps = st->epsilon(t, pi);
        if (eps >= 1.0) return {{1.0, pi_llr}};
        if (eps <= 0.0) return {{1.0, 0.0}};
        return {{eps, pi_llr}, {1.0 - eps, 0.0}};
    }
    if (const auto* bs = std::get_if<BinarySplitDisclosure>(&policy)) {
        if (pi < bs->lo || pi > bs->hi) return {{1.0, pi_llr}};
        const double w_hi = (pi - bs->lo) / (bs->hi - bs->lo);
        std::vector<DisclosureBranchLlr> out;
        if (w_hi > 0.0) out.push_back({w_hi, std::log(bs->hi / (1.0 - bs->hi))});
        if (w_hi < 1.0) out.push_back({1.0 - w_hi, std::log(bs->lo / (1.0 - bs->lo))});
        return out;
    }
    throw std::logic_error(
        "disclosure_branches_llr: LastK is evolved by the last-k engine");
}

// Sampled disclosure for the Monte Carlo engine. For LastK the engine passes
// the Bayes posterior of the current action tuple via lastk_nu.
inline double disclose(const DisclosurePolicy& policy, double pi,
                       std::size_t t, std::optional<double> lastk_nu,
                       double u) {
    if (std::holds_alternative<LastKDisclosure>(policy)) {
        if (!lastk_nu) {
            throw std::logic_error(
                "disclose: LastK requires the engine's tuple posterior");
        }
        return *lastk_nu;
    }
    if (const auto* st = std::get_if<StochasticDisclosure>(&policy)) {
        return u < st->epsilon(t, pi) ? pi : 0.5;
    }
    if (const auto* bs = std::get_if<BinarySplitDisclosure>(&policy)) {
        if (pi < bs->lo || pi > bs->hi) return pi;
        return u < (pi - bs->lo) / (bs->hi - bs->lo) ? bs->hi : bs->lo;
    }
    auto branches = disclosure_branches(policy, pi, t);
    return branches.front().nu;
}

// ---------------------------------------------------------------------------
// Transfer schemes: map (t, nu_t) to the transfer tau_t paid on the high
// action. Positive tau subsidizes the high action.
// ---------------------------------------------------------------------------

struct ZeroTransfers {};

// Subsidizes the action opposite the nu-favored one: -tau when nu > 1/2,
// +tau when nu < 1/2, 0 at nu = 1/2.
struct ConstantContrarian {
    double tau = 0.0;
};

struct TransferBand {
    double lo = 0.0;
    double hi = 1.0;
    double tau = 0.0;
};

struct TransferTable {
    std::vector<TransferBand> bands;  // over nu

    double lookup(double nu) const {
        for (const auto& band : bands) {
            if (nu >= band.lo && nu <= band.hi) return band.tau;
        }
        throw std::invalid_argument("TransferTable: nu outside every band");
    }
};

struct TransferSchedule {
    std::vector<TransferTable> per_period;  // 1-based; last entry repeats
};

using TransferScheme = std::variant<ZeroTransfers, ConstantContrarian,
                                    TransferTable, TransferSchedule>;

inline void validate(const TransferScheme& scheme) {
    auto check_tau = [](double tau) {
        if (!(std::abs(tau) < 1.0)) {
            throw std::invalid_argument("TransferScheme: need |tau| < 1");
        }
    };
    if (const auto* cc = std::get_if<ConstantContrarian>(&scheme)) {
        check_tau(cc->tau);
        if (!(cc->tau >= 0.0)) {
            throw std::invalid_argument(
                "ConstantContrarian: tau must be nonnegative");
        }
    } else if (const auto* tb = std::get_if<TransferTable>(&scheme)) {
        for (const auto& band : tb->bands) check_tau(band.tau);
    } else if (const auto* sc = std::get_if<TransferSchedule>(&scheme)) {
        if (sc->per_period.empty()) {
            throw std::invalid_argument("TransferSchedule: empty schedule");
        }
        for (const auto& table : sc->per_period) {
            for (const auto& band : table.bands) check_tau(band.tau);
        }
    }
}

inline double transfer(const TransferScheme& scheme, double nu,
                       std::size_t t) {
    if (std::holds_alternative<ZeroTransfers>(scheme)) return 0.0;
    if (const auto* cc = std::get_if<ConstantContrarian>(&scheme)) {
        if (nu > 0.5) return -cc->tau;
        if (nu < 0.5) return cc->tau;
        return 0.0;
    }
    if (const auto* tb = std::get_if<TransferTable>(&scheme)) {
        return tb->lookup(nu);
    }
    const auto& sc = std::get<TransferSchedule>(scheme);
    const std::size_t idx =
        t <= sc.per_period.size() ? t - 1 : sc.per_period.size() - 1;
    return sc.per_period[idx].lookup(nu);
}

// ---------------------------------------------------------------------------
// Dictated-cutoff benchmark: overrides the agents' Bayesian cutoffs with a
// user-supplied schedule (finite prefix, then a constant tail).
// ---------------------------------------------------------------------------

struct DictatedCutoffSchedule {
    std::vector<double> prefix;
    double tail = 0.5;

    double at(std::size_t t) const {
        const double c =
            t <= prefix.size() ? prefix[t - 1] : tail;
        if (!(c > 0.0 && c < 1.0)) {
            throw std::invalid_argument(
                "DictatedCutoffSchedule: cutoffs must be interior");
        }
        return c;
    }
};

}  // namespace seqlearn
