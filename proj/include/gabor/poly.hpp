#ifndef GABOR_POLY_HPP
#define GABOR_POLY_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace gabor::poly {

// Polynomials are coefficient vectors in ascending powers: c[0] + c[1] u + ...

inline double eval(std::span<const double> c, double u) {
    double r = 0.0;
    for (std::size_t i = c.size(); i-- > 0;)
        r = r * u + c[i];
    return r;
}

inline std::vector<double> mul(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) return {};
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] += a[i] * b[j];
    return out;
}

/// Coefficients of p(u + delta).
inline std::vector<double> shift_origin(std::span<const double> c, double delta) {
    const std::size_t n = c.size();
    std::vector<double> out(n, 0.0);
    // Horner form of p(u + delta): repeatedly fold the highest coefficient in.
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = n - 1; j > 0; --j)
            out[j] = out[j] * delta + out[j - 1];
        out[0] = out[0] * delta + c[i];
    }
    return out;
}

inline std::vector<double> derivative(std::span<const double> c) {
    if (c.size() <= 1) return {0.0};
    std::vector<double> out(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i)
        out[i - 1] = c[i] * static_cast<double>(i);
    return out;
}

/// Plain definite integral over [u0, u1].
inline double integral(std::span<const double> c, double u0, double u1) {
    double r = 0.0;
    double p0 = u0, p1 = u1;
    for (std::size_t m = 0; m < c.size(); ++m) {
        r += c[m] * (p1 - p0) / static_cast<double>(m + 1);
        p0 *= u0;
        p1 *= u1;
    }
    return r;
}

/// Closed-form oscillatory moment: integral of p(u) e^{-i omega u} over [u0, u1].
/// Series branch for small |omega| (the omega -> 0 limit is the plain
/// polynomial integral), integration-by-parts recurrence otherwise. The
/// recurrence is stable once |omega| exceeds the degree; the series is used
/// below that point, where its terms decay after k ~ |omega|.
std::complex<double> osc_integral(std::span<const double> c, double u0, double u1,
                                  double omega);

} // namespace gabor::poly

#endif
