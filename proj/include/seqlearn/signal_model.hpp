#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "seqlearn/numerics.hpp"

namespace seqlearn {

enum class State { High, Low };
enum class Action { High, Low };

inline char state_char(State s) { return s == State::High ? 'h' : 'l'; }
inline char action_char(Action a) { return a == Action::High ? 'h' : 'l'; }

// Symmetric tail-regular private-belief distribution. The built-in "power"
// family mirrors a power law around 1/2:
//
//   F(q) = (1/2)(2q)^a           for q <= 1/2,
//   F(q) = 1 - (1/2)(2(1-q))^a   for q >  1/2,
//
// so F(q) ~ 2^(a-1) q^a near 0 and a = 1 is the uniform distribution. The
// conditional CDFs follow from
//   F_h(q) = 2( q F(q) - int_0^q F ),   F_l(q) = 2( (1-q) F(q) + int_0^q F ),
// for which the running integral has a closed form in this family.
class SignalModel {
  public:
    explicit SignalModel(double alpha) : alpha_(alpha) {
        if (!(std::isfinite(alpha)) || alpha <= 0.0) {
            throw std::invalid_argument(
                "SignalModel: alpha must be finite and positive, got " +
                std::to_string(alpha));
        }
        epsilon_f_ = std::min(1.0 - cdf_conditional(State::Low, 0.5),
                              cdf_conditional(State::High, 0.5));
    }

    double alpha() const { return alpha_; }
    std::string family() const { return "power"; }

    // Unconditional CDF.
    double cdf(double q) const {
        check_domain(q);
        if (q <= 0.5) return 0.5 * std::pow(2.0 * q, alpha_);
        return 1.0 - 0.5 * std::pow(2.0 * (1.0 - q), alpha_);
    }

    // Unconditional density.
    double pdf(double q) const {
        check_domain(q);
        const double z = q <= 0.5 ? 2.0 * q : 2.0 * (1.0 - q);
        return alpha_ * std::pow(z, alpha_ - 1.0);
    }

    // int_0^q F(x) dx, closed form.
    double cdf_integral(double q) const {
        check_domain(q);
        const double a1 = alpha_ + 1.0;
        if (q <= 0.5) return std::pow(2.0 * q, a1) / (4.0 * a1);
        return q - 0.5 + std::pow(2.0 * (1.0 - q), a1) / (4.0 * a1);
    }

    double cdf_conditional(State state, double q) const {
        check_domain(q);
        const double f = cdf(q);
        const double integral = cdf_integral(q);
        if (state == State::High) return 2.0 * (q * f - integral);
        return 2.0 * ((1.0 - q) * f + integral);
    }

    double pdf_conditional(State state, double q) const {
        const double f = pdf(q);
        return state == State::High ? 2.0 * q * f : 2.0 * (1.0 - q) * f;
    }

    // min{ P_l[q >= 1/2], P_h[q < 1/2] }; the two arguments coincide for any
    // symmetric model.
    double epsilon_f() const { return epsilon_f_; }

    // Inverse conditional CDF, solved by bisection so it works for every
    // alpha without assumptions on the tails.
    double sample_private_belief(State state, double u) const {
        if (!(u > 0.0 && u < 1.0)) {
            throw std::domain_error(
                "sample_private_belief: u must lie in (0,1)");
        }
        return bisect_increasing(
            [&](double q) { return cdf_conditional(state, q); }, 0.0, 1.0, u,
            1e-12);
    }

    struct EfficiencyIntegral {
        bool finite = false;
        double value = 0.0;  // extrapolated value when finite
    };

    // Classifies int_0^1 dx / F(x) by refining the lower endpoint. The
    // integral is evaluated in log coordinates so the near-0 spike is tame.
    EfficiencyIntegral efficiency_integral() const {
        EfficiencyIntegral out;
        double prev = 0.0;
        double curr = 0.0;
        double rel_change = 1.0;
        for (double delta = 1e-2; delta >= 0.5e-12; delta *= 1e-2) {
            curr = integral_from(delta);
            if (prev > 0.0) rel_change = (curr - prev) / curr;
            prev = curr;
        }
        if (rel_change > 1e-3) {
            out.finite = false;
            return out;
        }
        out.finite = true;
        out.value = curr;
        return out;
    }

    // Analytic classification for the power family: finite iff alpha < 1.
    bool efficiency_integral_finite_analytic() const { return alpha_ < 1.0; }

  private:
    double integral_from(double delta) const {
        // x = e^u, dx = e^u du.
        auto g = [&](double u) {
            const double x = std::exp(u);
            return x / cdf(x);
        };
        const double lo = std::log(delta);
        // Coarse magnitude estimate sets the absolute tolerance.
        const double coarse = adaptive_simpson(g, lo, 0.0, 1e-4, 20);
        const double tol = std::max(1e-10, 1e-9 * std::abs(coarse));
        return adaptive_simpson(g, lo, 0.0, tol, 48);
    }

    static void check_domain(double q) {
        if (!(q >= 0.0 && q <= 1.0)) {
            throw std::domain_error("SignalModel: q must lie in [0,1]");
        }
    }

    double alpha_;
    double epsilon_f_;
};

inline SignalModel make_power_family(double alpha) {
    return SignalModel(alpha);
}

}  // namespace seqlearn
