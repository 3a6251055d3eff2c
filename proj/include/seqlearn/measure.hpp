#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "seqlearn/numerics.hpp"

namespace seqlearn {

// Discretized conditional laws of the planner's LLR, one weight vector per
// state. Mass lives on B+1 uniformly spaced nodes covering [-L, L]; node B/2
// sits exactly at 0, so a mean-preserving two-point split between adjacent
// nodes also preserves E|l| (no split interval straddles a sign change).
class ConditionalBeliefMeasure {
  public:
    ConditionalBeliefMeasure(std::size_t bins, double clamp)
        : bins_(bins),
          clamp_(clamp),
          dx_(2.0 * clamp / static_cast<double>(bins)),
          mass_high_(bins + 1, 0.0),
          mass_low_(bins + 1, 0.0) {
        if (bins < 2 || bins % 2 != 0) {
            throw std::invalid_argument(
                "ConditionalBeliefMeasure: bins must be even and >= 2");
        }
        // pi_1 = 1/2: all mass at l = 0 under both states.
        mass_high_[bins / 2] = 1.0;
        mass_low_[bins / 2] = 1.0;
    }

    std::size_t node_count() const { return bins_ + 1; }
    double node_llr(std::size_t i) const {
        return -clamp_ + dx_ * static_cast<double>(i);
    }
    double spacing() const { return dx_; }
    double clamp() const { return clamp_; }

    double mass_high(std::size_t i) const { return mass_high_[i]; }
    double mass_low(std::size_t i) const { return mass_low_[i]; }

    std::vector<double>& mass_high() { return mass_high_; }
    std::vector<double>& mass_low() { return mass_low_; }
    const std::vector<double>& mass_high() const { return mass_high_; }
    const std::vector<double>& mass_low() const { return mass_low_; }

    double total_high() const { return sum(mass_high_); }
    double total_low() const { return sum(mass_low_); }

    // Unconditional E[pi] under the uniform prior.
    double mean_pi() const {
        double acc = 0.0;
        for (std::size_t i = 0; i < node_count(); ++i) {
            acc += 0.5 * (mass_high_[i] + mass_low_[i]) *
                   prob_from_llr(node_llr(i));
        }
        return acc;
    }

    double mean_abs_llr() const {
        double acc = 0.0;
        for (std::size_t i = 0; i < node_count(); ++i) {
            acc += 0.5 * (mass_high_[i] + mass_low_[i]) *
                   std::abs(node_llr(i));
        }
        return acc;
    }

    // Deposits weight at llr into a destination buffer, splitting linearly
    // between the two enclosing nodes. Out-of-range mass is absorbed into the
    // edge node and reported as leakage.
    double deposit(std::vector<double>& buffer, double llr,
                   double weight) const {
        if (weight <= 0.0) return 0.0;
        if (llr <= -clamp_) {
            buffer.front() += weight;
            return llr < -clamp_ ? weight : 0.0;
        }
        if (llr >= clamp_) {
            buffer.back() += weight;
            return llr > clamp_ ? weight : 0.0;
        }
        const double pos = (llr + clamp_) / dx_;
        const auto lo = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(lo);
        buffer[lo] += weight * (1.0 - frac);
        buffer[lo + 1] += weight * frac;
        return 0.0;
    }

  private:
    static double sum(const std::vector<double>& v) {
        double acc = 0.0;
        for (double x : v) acc += x;
        return acc;
    }

    std::size_t bins_;
    double clamp_;
    double dx_;
    std::vector<double> mass_high_;
    std::vector<double> mass_low_;
};

}  // namespace seqlearn
