#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace seqlearn {

// Adaptive Simpson quadrature. Recursion depth is bounded; the tolerance is
// absolute and split in half at each subdivision.
namespace detail {

template <typename F>
double simpson_segment(F&& f, double a, double b, double fa, double fm,
                       double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson_rec(F&& f, double a, double b, double fa, double fm,
                            double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson_segment(f, a, m, fa, flm, fm);
    const double right = simpson_segment(f, m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol,
                                depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol,
                                depth - 1);
}

}  // namespace detail

template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol = 1e-10,
                        int max_depth = 48) {
    if (!(a <= b)) throw std::invalid_argument("adaptive_simpson: a > b");
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = detail::simpson_segment(f, a, b, fa, fm, fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol,
                                        max_depth);
}

// Finds x in [lo, hi] with f(x) = target for nondecreasing f, by bisection.
// Terminates when |f(x) - target| <= ftol or the bracket collapses.
template <typename F>
double bisect_increasing(F&& f, double lo, double hi, double target,
                         double ftol = 1e-12) {
    double flo = f(lo) - target;
    double fhi = f(hi) - target;
    if (flo > 0.0) return lo;
    if (fhi < 0.0) return hi;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid) - target;
        if (std::abs(fmid) <= ftol || hi - lo <=
                std::numeric_limits<double>::epsilon() * (1.0 + std::abs(mid))) {
            return mid;
        }
        if (fmid < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Probability <-> log-likelihood-ratio coordinates.
inline double llr_from_prob(double p) { return std::log(p / (1.0 - p)); }

inline double prob_from_llr(double llr) {
    // Numerically stable sigmoid.
    if (llr >= 0.0) {
        return 1.0 / (1.0 + std::exp(-llr));
    }
    const double e = std::exp(llr);
    return e / (1.0 + e);
}

// Ordinary least squares slope/intercept of y on x.
struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
};

template <typename XIt, typename YIt>
OlsFit ols_fit(XIt x_begin, XIt x_end, YIt y_begin) {
    std::size_t n = 0;
    double sx = 0.0, sy = 0.0;
    for (XIt it = x_begin; it != x_end; ++it, ++n) sx += *it;
    YIt y = y_begin;
    for (XIt it = x_begin; it != x_end; ++it, ++y) sy += *y;
    if (n < 3) throw std::invalid_argument("ols_fit: need at least 3 points");
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    y = y_begin;
    for (XIt it = x_begin; it != x_end; ++it, ++y) {
        sxx += (*it - mx) * (*it - mx);
        sxy += (*it - mx) * (*y - my);
    }
    OlsFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double sse = 0.0;
    y = y_begin;
    for (XIt it = x_begin; it != x_end; ++it, ++y) {
        const double r = *y - (fit.intercept + fit.slope * *it);
        sse += r * r;
    }
    fit.slope_stderr =
        std::sqrt(sse / (static_cast<double>(n) - 2.0) / sxx);
    return fit;
}

}  // namespace seqlearn
