#include "gabor/poly.hpp"

namespace gabor::poly {

namespace {

std::complex<double> osc_integral_series(std::span<const double> c, double u0, double u1,
                                         double omega) {
    // integral p(u) e^{-i w u} = sum_k (-i w)^k / k! * integral u^k p(u)
    // Requires |u| <= O(1); callers pass piece-local coordinates in [0, 1].
    const std::complex<double> miw(0.0, -omega);
    std::complex<double> factor(1.0, 0.0); // (-i w)^k / k!
    std::complex<double> acc(0.0, 0.0);
    double scale = 0.0;
    for (const double cm : c) scale += std::abs(cm);
    const double ubound = std::max(std::abs(u0), std::abs(u1));
    for (int k = 0; k < 512; ++k) {
        // moment integral of u^k p(u) over [u0, u1]
        double m = 0.0;
        double p0 = std::pow(u0, k + 1), p1 = std::pow(u1, k + 1);
        for (std::size_t j = 0; j < c.size(); ++j) {
            m += c[j] * (p1 - p0) / static_cast<double>(k + j + 1);
            p0 *= u0;
            p1 *= u1;
        }
        acc += factor * m;
        const double tail = std::abs(factor) * scale * std::pow(ubound, k + 1);
        if (tail < 1e-19 * (1.0 + std::abs(acc)) && k > 2) break;
        factor *= miw / static_cast<double>(k + 1);
    }
    return acc;
}

std::complex<double> osc_integral_recurrence(std::span<const double> c, double u0, double u1,
                                             double omega) {
    // J_m = integral u^m e^{-i w u};  J_m = (u^m e)/(-iw) |_{u0}^{u1} - m/(-iw) J_{m-1}
    const std::complex<double> iw(0.0, -omega);
    const std::complex<double> e0 = std::exp(std::complex<double>(0.0, -omega * u0));
    const std::complex<double> e1 = std::exp(std::complex<double>(0.0, -omega * u1));
    std::complex<double> jm = (e1 - e0) / iw;
    std::complex<double> acc = c.empty() ? std::complex<double>(0, 0) : c[0] * jm;
    double p0 = 1.0, p1 = 1.0;
    for (std::size_t m = 1; m < c.size(); ++m) {
        p0 *= u0;
        p1 *= u1;
        jm = (p1 * e1 - p0 * e0) / iw - (static_cast<double>(m) / iw) * jm;
        acc += c[m] * jm;
    }
    return acc;
}

} // namespace

std::complex<double> osc_integral(std::span<const double> c, double u0, double u1,
                                  double omega) {
    if (c.empty() || u0 == u1) return {0.0, 0.0};
    const double deg = static_cast<double>(c.size() - 1);
    if (std::abs(omega) < std::max(4.0, 1.5 * deg))
        return osc_integral_series(c, u0, u1, omega);
    return osc_integral_recurrence(c, u0, u1, omega);
}

} // namespace gabor::poly
