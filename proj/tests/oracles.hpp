#ifndef GABOR_TESTS_ORACLES_HPP
#define GABOR_TESTS_ORACLES_HPP

// Test-side oracles, independent of the library code paths they check.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracles {

/// Brute-force rect^(p) by iterated grid convolution: each level applies the
/// moving average of width 1 through prefix sums of trapezoid weights.
/// Accuracy ~ steps^-2 per level; steps_per_unit = 4096 gives ~1e-7.
class ConvolutionSpline {
public:
    explicit ConvolutionSpline(int p, int steps_per_unit = 4096)
        : p_(p), n_(steps_per_unit) {
        const long len = static_cast<long>(p) * n_ + 1; // grid over [-p/2, p/2]
        values_.assign(len, 0.0);
        // rect: indicator of [-1/2, 1/2] sampled on the current support grid
        for (long i = 0; i < len; ++i) {
            const double x = x_at(i);
            values_[i] = (std::abs(x) < 0.5) ? 1.0 : (std::abs(x) == 0.5 ? 0.5 : 0.0);
        }
        // deliberately sampled with the half-endpoint convention so the
        // trapezoid prefix sums see the mean value at the jump
        for (int level = 2; level <= p; ++level) {
            std::vector<double> prefix(values_.size(), 0.0);
            const double h = 1.0 / n_;
            for (std::size_t i = 1; i < values_.size(); ++i)
                prefix[i] = prefix[i - 1] + 0.5 * h * (values_[i - 1] + values_[i]);
            std::vector<double> next(values_.size(), 0.0);
            for (std::size_t i = 0; i < values_.size(); ++i) {
                const double x = x_at(static_cast<long>(i));
                next[i] = interp_prefix(prefix, x + 0.5) - interp_prefix(prefix, x - 0.5);
            }
            values_ = std::move(next);
        }
    }

    double operator()(double x) const {
        const double half = 0.5 * p_;
        if (x < -half || x > half) return 0.0;
        const double pos = (x + half) * n_;
        const auto i = static_cast<long>(pos);
        if (i < 0) return values_.front();
        if (i + 1 >= static_cast<long>(values_.size())) return values_.back();
        const double frac = pos - static_cast<double>(i);
        return values_[i] * (1.0 - frac) + values_[i + 1] * frac;
    }

private:
    double x_at(long i) const { return -0.5 * p_ + static_cast<double>(i) / n_; }

    double interp_prefix(const std::vector<double>& prefix, double x) const {
        const double half = 0.5 * p_;
        if (x <= -half) return 0.0;
        if (x >= half) return prefix.back();
        const double pos = (x + half) * n_;
        const auto i = static_cast<long>(pos);
        const double frac = pos - static_cast<double>(i);
        return prefix[i] * (1.0 - frac) + prefix[i + 1] * frac;
    }

    int p_;
    long n_;
    std::vector<double> values_;
};

namespace detail {

struct SimpsonRec {
    const std::function<double(double)>& f;

    double run(double lo, double hi, double flo, double fmid, double fhi, double whole,
               double eps, int depth) const {
        const double m = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + m), rm = 0.5 * (m + hi);
        const double flm = f(lm), frm = f(rm);
        const double left = (m - lo) / 6.0 * (flo + 4.0 * flm + fmid);
        const double right = (hi - m) / 6.0 * (fmid + 4.0 * frm + fhi);
        if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * eps)
            return left + right + (left + right - whole) / 15.0;
        return run(lo, m, flo, flm, fmid, left, 0.5 * eps, depth - 1) +
               run(m, hi, fmid, frm, fhi, right, 0.5 * eps, depth - 1);
    }
};

} // namespace detail

/// Adaptive Simpson for smooth real integrands.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12, int depth = 24) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::SimpsonRec{f}.run(a, b, fa, fm, fb, whole, tol, depth);
}

/// Complex oscillatory integral by adaptive Simpson on both parts, splitting
/// at the supplied breakpoints.
inline std::complex<double> quad_oscillatory(const std::function<double(double)>& w,
                                             double omega,
                                             const std::vector<double>& breakpoints,
                                             double tol = 1e-12) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        // nudge inside the cell: endpoint values at jump breakpoints must not
        // leak into the Simpson samples (the integral is an a.e. object)
        const double nudge = 1e-13 * (1.0 + std::abs(breakpoints[i]) +
                                      std::abs(breakpoints[i + 1]));
        const double a = breakpoints[i] + nudge, b = breakpoints[i + 1] - nudge;
        if (b - a < 1e-15) continue;
        acc += std::complex<double>(
            adaptive_simpson([&](double t) { return w(t) * std::cos(omega * t); }, a, b, tol),
            adaptive_simpson([&](double t) { return -w(t) * std::sin(omega * t); }, a, b,
                             tol));
    }
    return acc;
}

} // namespace oracles

#endif
