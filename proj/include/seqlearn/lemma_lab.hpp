#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "seqlearn/belief_update.hpp"
#include "seqlearn/config.hpp"
#include "seqlearn/decision.hpp"
#include "seqlearn/engine_exact.hpp"
#include "seqlearn/numerics.hpp"
#include "seqlearn/rng.hpp"
#include "seqlearn/signal_model.hpp"

namespace seqlearn {

// One table for every tolerance used by the checks, so the gate is auditable
// in a single place.
namespace tolerances {
inline constexpr double kCutoffShiftSlack = 1e-12;
inline constexpr double kSignalGainSlack = 1e-9;
inline constexpr double kCdfIdentity = 1e-9;
inline constexpr double kCdfIdentityClosedForm = 1e-12;  // alpha = 1
inline constexpr double kFosdSlack = 1e-12;
inline constexpr double kUhOver2FWindow = 0.01;    // U^h/(2F) in [0.99, 1.01]
inline constexpr double kUlConstStability = 0.05;  // C_emp stable to 5%
inline constexpr double kTailSlopeWindow = 0.05;   // fitted exponent +- 0.05
inline constexpr double kGrowthSlack = 1e-6;       // E|l| nondecreasing
inline constexpr double kRatioGrowthFactor = 1.1;  // growth-ratio no-trend
}  // namespace tolerances

struct CheckResult {
    std::string name;
    bool pass = false;
    double observed = 0.0;
    double bound = 0.0;
    double tolerance = 0.0;
    std::size_t samples = 0;
    std::string details;
};

// |c(nu,tau) - (1-nu)| <= |tau| on n random pairs. The cutoff function is
// injectable so the suite can prove it catches a broken implementation.
inline CheckResult check_cutoff_shift(
    std::size_t n, std::uint64_t seed = 7,
    const std::function<double(double, double)>& cutoff_fn = {}) {
    auto c_of = cutoff_fn ? cutoff_fn
                          : [](double nu, double tau) { return cutoff(nu, tau); };
    SplitStream stream(seed, 0);
    double worst = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double nu = stream.next_uniform();
        const double tau = 2.0 * stream.next_uniform() - 1.0;
        const double shift = std::abs(c_of(nu, tau) - (1.0 - nu));
        worst = std::max(worst, shift - std::abs(tau));
    }
    CheckResult res;
    res.name = "cutoff_shift";
    res.observed = worst;
    res.bound = 0.0;
    res.tolerance = tolerances::kCutoffShiftSlack;
    res.samples = n;
    res.pass = worst <= res.tolerance;
    return res;
}

// P[a != theta | nu, tau] >= eps_F * P[b != theta | nu, tau] pointwise on a
// (nu, tau) grid, both sides in closed form from the conditional CDFs.
inline CheckResult check_signal_gain(const SignalModel& model,
                                     std::size_t nu_points = 200,
                                     std::size_t tau_points = 19) {
    const double eps_f = model.epsilon_f();
    double worst = 1.0;
    std::size_t samples = 0;
    for (std::size_t i = 1; i <= nu_points; ++i) {
        const double nu = static_cast<double>(i) /
                          static_cast<double>(nu_points + 1);
        const double nu_llr = std::log(nu / (1.0 - nu));
        for (std::size_t j = 0; j < tau_points; ++j) {
            const double tau =
                -0.9 + 1.8 * static_cast<double>(j) /
                           static_cast<double>(tau_points - 1);
            const CutoffPair cut = cutoff_pair(nu_llr, tau);
            const auto probs = action_probabilities(model, cut.c, cut.cbar);
            const double agent =
                nu * probs.low_given_high + (1.0 - nu) * probs.high_given_low;
            const double presignal =
                detail::presignal_high(nu_llr, tau) ? 1.0 - nu : nu;
            worst = std::min(worst, agent - eps_f * presignal);
            ++samples;
        }
    }
    CheckResult res;
    res.name = "signal_gain";
    res.observed = worst;
    res.bound = 0.0;
    res.tolerance = tolerances::kSignalGainSlack;
    res.samples = samples;
    res.pass = worst >= -res.tolerance;
    return res;
}

// Small-cutoff asymptotics of the LLR increments:
//   U^h(c)/(2F(c)) -> 1, U^l(c) = log c + O(1), and U^h(c) = Theta(c^alpha).
inline CheckResult check_tail_asymptotics(const SignalModel& model) {
    CheckResult res;
    res.name = "tail_asymptotics";
    const auto inc_at = [&](double c) { return llr_increments(model, c); };

    // The ratio converges to 1 at rate O(F(c)); c = 1e-3 suffices for
    // alpha >= 1 but heavier tails (larger F at fixed c) need a smaller c to
    // land inside the 1% window.
    const double c_ratio = model.alpha() >= 1.0 ? 1e-3 : 1e-8;
    const double ratio = inc_at(c_ratio).u_high / (2.0 * model.cdf(c_ratio));
    const bool ratio_ok =
        ratio >= 1.0 - tolerances::kUhOver2FWindow &&
        ratio <= 1.0 + tolerances::kUhOver2FWindow;

    const std::vector<double> cs = {1e-2, 1e-3, 1e-4};
    double c_emp_min = 1e300, c_emp_max = -1e300;
    for (double c : cs) {
        const double emp = std::abs(inc_at(c).u_low - std::log(c));
        c_emp_min = std::min(c_emp_min, emp);
        c_emp_max = std::max(c_emp_max, emp);
    }
    const bool const_ok =
        (c_emp_max - c_emp_min) / c_emp_max <= tolerances::kUlConstStability;

    std::vector<double> log_c, log_uh;
    for (double c = 1e-4; c <= 1.0000001e-2; c *= std::pow(10.0, 0.25)) {
        log_c.push_back(std::log(c));
        log_uh.push_back(std::log(inc_at(c).u_high));
    }
    const OlsFit fit = ols_fit(log_c.begin(), log_c.end(), log_uh.begin());
    const bool slope_ok =
        std::abs(fit.slope - model.alpha()) <= tolerances::kTailSlopeWindow;

    res.observed = ratio;
    res.bound = 1.0;
    res.tolerance = tolerances::kUhOver2FWindow;
    res.samples = cs.size() + log_c.size() + 1;
    res.pass = ratio_ok && const_ok && slope_ok;
    std::ostringstream os;
    os << "uh_over_2F=" << ratio << " c_emp_spread="
       << (c_emp_max - c_emp_min) / c_emp_max << " uh_slope=" << fit.slope
       << " (alpha=" << model.alpha() << ")";
    res.details = os.str();
    return res;
}

// E|l_t| nondecreasing and the belief-growth ratio
//   (E|l_{t+1}| - E|l_t|) / (P[b_t != theta] + E|tau_t|)
// shows no growth trend: its running max at T is within a factor of its
// running max at T/2. The ratio bound only holds for alpha >= 1; for
// efficient models the monotonicity half still applies.
inline CheckResult check_belief_growth(const ExperimentConfig& cfg,
                                       bool check_ratio_trend = true) {
    if (cfg.engine.horizon < 2000) {
        throw std::invalid_argument("check_belief_growth: need T >= 2000");
    }
    const ExactResult result = exact_evolve(cfg);
    const auto& series = result.series;
    double worst_increment = 1e300;
    double max_ratio_half = 0.0, max_ratio_full = 0.0;
    const std::size_t half = cfg.engine.horizon / 2;
    for (std::size_t i = 0; i + 1 < series.size(); ++i) {
        const double inc = series[i + 1].e_abs_llr - series[i].e_abs_llr;
        worst_increment = std::min(worst_increment, inc);
        const std::size_t t = series[i].t;
        if (t < 10) continue;
        const double denom =
            series[i].p_mistake_presignal + series[i].e_abs_transfer;
        if (denom <= 0.0) continue;
        const double ratio = inc / denom;
        if (t <= half) max_ratio_half = std::max(max_ratio_half, ratio);
        max_ratio_full = std::max(max_ratio_full, ratio);
    }
    CheckResult res;
    res.name = "belief_growth";
    res.observed = worst_increment;
    res.bound = 0.0;
    res.tolerance = tolerances::kGrowthSlack;
    res.samples = series.size();
    const bool monotone = worst_increment >= -tolerances::kGrowthSlack;
    const bool no_trend =
        !check_ratio_trend ||
        max_ratio_full <= tolerances::kRatioGrowthFactor * max_ratio_half;
    res.pass = monotone && no_trend;
    std::ostringstream os;
    os << "min_increment=" << worst_increment
       << " ratio_max_half=" << max_ratio_half
       << " ratio_max_full=" << max_ratio_full;
    res.details = os.str();
    return res;
}

// Symmetry, averaging, conditional symmetry and FOSD of (F, F_h, F_l).
inline CheckResult check_cdf_identities(const SignalModel& model,
                                        std::size_t n = 10000) {
    const double tol = model.alpha() == 1.0
                           ? tolerances::kCdfIdentityClosedForm
                           : tolerances::kCdfIdentity;
    double worst = 0.0;
    double worst_fosd = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        const double q = static_cast<double>(i) / static_cast<double>(n);
        const double f = model.cdf(q);
        const double fm = model.cdf(1.0 - q);
        const double fh = model.cdf_conditional(State::High, q);
        const double fl = model.cdf_conditional(State::Low, q);
        const double fhm = model.cdf_conditional(State::High, 1.0 - q);
        const double flm = model.cdf_conditional(State::Low, 1.0 - q);
        worst = std::max(worst, std::abs(f + fm - 1.0));
        worst = std::max(worst, std::abs(fh + flm - 1.0));
        worst = std::max(worst, std::abs(fl + fhm - 1.0));
        worst = std::max(worst, std::abs(0.5 * (fh + fl) - f));
        worst_fosd = std::max(worst_fosd, fh - fl);
    }
    CheckResult res;
    res.name = "cdf_identities";
    res.observed = worst;
    res.bound = 0.0;
    res.tolerance = tol;
    res.samples = n + 1;
    res.pass = worst <= tol && worst_fosd <= tolerances::kFosdSlack;
    std::ostringstream os;
    os << "max_identity_violation=" << worst
       << " max_fosd_violation=" << worst_fosd;
    res.details = os.str();
    return res;
}

// The full suite over the default models.
inline std::vector<CheckResult> run_lemma_suite() {
    std::vector<CheckResult> results;
    results.push_back(check_cutoff_shift(1000000));
    for (double alpha : {0.5, 1.0, 1.5}) {
        const SignalModel model(alpha);
        auto tag = [&](CheckResult res) {
            std::ostringstream os;
            os << res.name << "[alpha=" << alpha << "]";
            res.name = os.str();
            return res;
        };
        results.push_back(tag(check_cdf_identities(model)));
        results.push_back(tag(check_signal_gain(model)));
        results.push_back(tag(check_tail_asymptotics(model)));
        ExperimentConfig cfg;
        cfg.distribution.alpha = alpha;
        cfg.engine.kind = EngineKind::Exact;
        cfg.engine.horizon = 2000;
        results.push_back(tag(check_belief_growth(cfg, alpha >= 1.0)));
    }
    return results;
}

}  // namespace seqlearn
