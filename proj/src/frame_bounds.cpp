#include "gabor/frame_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "gabor/errors.hpp"
#include "gabor/kernels.hpp"
#include "gabor/poly.hpp"

namespace gabor {

const char* to_string(BoundsKind kind) {
    switch (kind) {
        case BoundsKind::certified_lower_upper: return "certified_lower_upper";
        case BoundsKind::exact: return "exact";
        case BoundsKind::numerical_estimate: return "numerical_estimate";
    }
    return "?";
}

double snap_floor(double x) {
    const double r = std::round(x);
    if (std::abs(x - r) < 1e-12 * std::max(1.0, std::abs(x))) return r;
    return std::floor(x);
}

SobolevWindow cosine_window(double support_p, double a) {
    if (support_p <= 0.0) throw domain_error("cosine_window: support must be positive");
    SobolevWindow w;
    w.half_support = 0.5 * support_p;
    w.evaluator = [support_p](double x) {
        return (std::abs(x) < 0.5 * support_p) ? std::cos(M_PI * x / support_p) : 0.0;
    };
    w.deriv_l2_sq = M_PI * M_PI / (2.0 * support_p);
    w.m = std::cos(M_PI * a / (2.0 * support_p));
    w.M = 1.0;
    w.estimated = false;
    return w;
}

SobolevWindow sobolev_from_samples(double t0, double dt, std::vector<double> samples,
                                   double a) {
    if (samples.size() < 3 || dt <= 0.0)
        throw domain_error("sobolev_from_samples: need at least 3 samples and dt > 0");
    const double t1 = t0 + dt * static_cast<double>(samples.size() - 1);
    SobolevWindow w;
    w.half_support = std::max(std::abs(t0), std::abs(t1));
    auto table = std::make_shared<std::vector<double>>(std::move(samples));
    const std::size_t n = table->size();
    w.evaluator = [table, t0, dt, n](double x) {
        const double pos = (x - t0) / dt;
        if (pos < 0.0 || pos > static_cast<double>(n - 1)) return 0.0;
        const std::size_t i = std::min(static_cast<std::size_t>(pos), n - 2);
        const double frac = pos - static_cast<double>(i);
        return (*table)[i] * (1.0 - frac) + (*table)[i + 1] * frac;
    };
    // ||psi'||^2 by central differences + trapezoid
    double acc = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double d = ((*table)[i + 1] - (*table)[i - 1]) / (2.0 * dt);
        acc += d * d * dt;
    }
    w.deriv_l2_sq = acc;
    // m, M over [-a/2, a/2]
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    const int scan = 4096;
    for (int i = 0; i < scan; ++i) {
        const double x = -0.5 * a + a * (i + 0.5) / scan;
        const double v = w.evaluator(x);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    w.m = lo;
    w.M = hi;
    w.estimated = true;
    return w;
}

namespace {

template <typename Eval>
double periodization_generic(double half_support, const Eval& feval, double a, double x) {
    const long n_lo = static_cast<long>(std::ceil((x - half_support) / a - 1e-12));
    const long n_hi = static_cast<long>(std::floor((x + half_support) / a + 1e-12));
    double acc = 0.0;
    for (long n = n_lo; n <= n_hi; ++n) {
        const double v = feval(x - a * static_cast<double>(n));
        acc += v * v;
    }
    return acc;
}

} // namespace

double periodization(const BSplineWindow& w, double a, double x) {
    if (a <= 0.0) throw domain_error("periodization: a must be positive");
    return periodization_generic(w.half_support(), [&](double t) { return w.eval(t); }, a, x);
}

double periodization(const SobolevWindow& w, double a, double x) {
    if (a <= 0.0) throw domain_error("periodization: a must be positive");
    return periodization_generic(w.half_support, w.evaluator, a, x);
}

void periodization_on_grid(const BSplineWindow& w, double a, double x0, double dx,
                           double* out, std::size_t n) {
    if (a <= 0.0 || dx <= 0.0 || n == 0)
        throw domain_error("periodization_on_grid: bad grid");
    std::fill(out, out + n, 0.0);
    std::vector<std::vector<double>> sq(w.piece_count());
    for (int i = 0; i < w.piece_count(); ++i) sq[i] = poly::mul(w.piece(i), w.piece(i));

    const double h = w.half_support();
    const double x_end = x0 + dx * static_cast<double>(n - 1);
    const long n_lo = static_cast<long>(std::ceil((x0 - h) / a - 1e-12)) - 1;
    const long n_hi = static_cast<long>(std::floor((x_end + h) / a + 1e-12)) + 1;
    for (long t = n_lo; t <= n_hi; ++t) {
        const double center = a * static_cast<double>(t);
        for (int i = 0; i < w.piece_count(); ++i) {
            const double left = center + w.piece_left(i);
            const double right = left + 1.0;
            long i_lo = static_cast<long>(std::ceil((left - x0) / dx - 1e-9));
            long i_hi = static_cast<long>(std::floor((right - x0) / dx - 1e-9));
            i_lo = std::max(i_lo, 0L);
            i_hi = std::min(i_hi, static_cast<long>(n) - 1);
            if (i_hi < i_lo) continue;
            const double u0 = (x0 + dx * static_cast<double>(i_lo)) - left;
            kernels::poly_accum_range(sq[i].data(), sq[i].size(), u0, dx, 1.0,
                                      out + i_lo, static_cast<std::size_t>(i_hi - i_lo + 1));
        }
    }
}

namespace {

// Largest a.e. number of length-p supports, spaced a apart, covering one
// point: p/a when that is an integer, floor(p/a) + 1 otherwise. Plain
// floor(p/a) undercounts off-integer lattices -- two unit rectangles spaced
// 0.8 apart overlap on a set of positive measure, so S_1(0.8, .) reaches 2.
double translate_overlap_count(int order, double a) {
    const double q = order / a;
    const double r = std::round(q);
    if (std::abs(q - r) < 1e-12 * std::max(1.0, q)) return r;
    return std::floor(q) + 1.0;
}

} // namespace

FrameBounds translate_overlap_bounds(int order, const LatticeParams& lat) {
    const double a = lat.a, b = lat.b;
    if (a <= 0.0 || b <= 0.0) throw domain_error("translate_overlap_bounds: need a, b > 0");
    if (a * b > 1.0 + 1e-12)
        throw domain_error("translate_overlap_bounds: ab > 1, no Gabor frame exists");
    const BSplineWindow w(order);
    if (order == 1) {
        if (a > 1.0)
            throw domain_error("translate_overlap_bounds: a > 1 with order 1, translates leave "
                               "gaps and the system is not complete");
    } else if (a >= order) {
        throw domain_error("translate_overlap_bounds: need a < p for order >= 2");
    }
    const double wa2 = w.eval(0.5 * a);
    return FrameBounds{wa2 * wa2 / b, translate_overlap_count(order, a) / b,
                       BoundsKind::certified_lower_upper};
}

FrameBounds krein_favard_exact(int order, double tol) {
    if (order < 1) throw domain_error("krein_favard_exact: order must be positive");
    if (tol <= 0.0) throw domain_error("krein_favard_exact: tol must be positive");
    const int p2 = 2 * order;
    const long double prefactor =
        std::pow(2.0L, static_cast<long double>(p2 + 1)) /
        std::pow(static_cast<long double>(M_PIl), static_cast<long double>(p2));
    long double sum = 0.0L;
    long nu = 0;
    for (;; ++nu) {
        const long double term = std::pow(2.0L * nu + 1.0L, -static_cast<long double>(p2));
        sum += term;
        // midpoint-rule残: after adding the integral correction below, the
        // remaining error is O(p * (2 nu)^{-(2p+1)})
        const long double resid =
            p2 * std::pow(2.0L * (nu + 1), -static_cast<long double>(p2 + 1)) / 6.0L;
        if (static_cast<double>(prefactor * resid) < 0.25 * tol && nu > 4) break;
        if (nu > 200000) break;
    }
    const long double n_next = static_cast<long double>(nu + 1);
    const long double tail =
        std::pow(2.0L * n_next, static_cast<long double>(1 - p2)) / (2.0L * (p2 - 1));
    const double lower = static_cast<double>(prefactor * (sum + tail));
    return FrameBounds{lower, 1.0, BoundsKind::exact};
}

FrameBounds sobolev_bounds(const SobolevWindow& w, const LatticeParams& lat) {
    const double a = lat.a, b = lat.b, p = 2.0 * w.half_support;
    if (a <= 0.0 || b <= 0.0) throw domain_error("sobolev_bounds: need a, b > 0");
    if (a * b > 1.0 + 1e-12)
        throw domain_error("sobolev_bounds: ab > 1, no Gabor frame exists");
    if (p <= a) throw domain_error("sobolev_bounds: need support p > a");
    if (w.m <= 0.0)
        throw domain_error("sobolev_bounds: window is not bounded below by a positive "
                           "constant on [-a/2, a/2]; no certificate is possible");
    const BoundsKind kind =
        w.estimated ? BoundsKind::numerical_estimate : BoundsKind::certified_lower_upper;
    return FrameBounds{w.m * w.m / b, snap_floor(p / a) * w.M * w.M / b, kind};
}

// ---------------------------------------------------------------------------
// Periodization extrema
// ---------------------------------------------------------------------------

namespace {

// Exact extrema for the piecewise-polynomial case. Between breakpoints the
// periodization is a single polynomial; endpoint limits are taken through the
// cell's own polynomial, which matches the a.e. sense of the frame condition
// (pointwise values at the p = 1 jump points would over-count).
std::pair<double, double> extrema_exact_bspline(const BSplineWindow& w, double a) {
    const double h = w.half_support();
    std::vector<double> cuts{-0.5 * a, 0.5 * a};
    const long n_lo = static_cast<long>(std::ceil((-0.5 * a - h) / a)) - 1;
    const long n_hi = static_cast<long>(std::floor((0.5 * a + h) / a)) + 1;
    for (long n = n_lo; n <= n_hi; ++n)
        for (int j = 0; j <= w.piece_count(); ++j) {
            const double x = a * static_cast<double>(n) + (-h + j);
            if (x > -0.5 * a - 1e-13 && x < 0.5 * a + 1e-13) cuts.push_back(x);
        }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double u, double v) { return std::abs(u - v) < 1e-13; }),
               cuts.end());

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    auto consider = [&](double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    };

    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const double cl = cuts[c], cr = cuts[c + 1];
        const double len = cr - cl;
        if (len < 1e-13) continue;
        const double mid = 0.5 * (cl + cr);
        // assemble the cell polynomial in v = x - cl
        std::vector<double> cell{0.0};
        const long m_lo = static_cast<long>(std::ceil((mid - h) / a));
        const long m_hi = static_cast<long>(std::floor((mid + h) / a));
        for (long n = m_lo; n <= m_hi; ++n) {
            const double center = a * static_cast<double>(n);
            const int idx = w.piece_index(mid - center);
            if (idx < 0) continue;
            const double delta = cl - center - w.piece_left(idx);
            const auto shifted = poly::shift_origin(w.piece(idx), delta);
            const auto sq = poly::mul(shifted, shifted);
            if (cell.size() < sq.size()) cell.resize(sq.size(), 0.0);
            for (std::size_t k = 0; k < sq.size(); ++k) cell[k] += sq[k];
        }
        consider(poly::eval(cell, 0.0));
        consider(poly::eval(cell, len));
        // interior critical points of the cell polynomial
        const auto dcell = poly::derivative(cell);
        const int scan = 64;
        double prev_v = poly::eval(dcell, 0.0);
        for (int s = 1; s <= scan; ++s) {
            const double v = len * static_cast<double>(s) / scan;
            const double cur = poly::eval(dcell, v);
            if ((prev_v <= 0.0 && cur >= 0.0) || (prev_v >= 0.0 && cur <= 0.0)) {
                double vl = len * static_cast<double>(s - 1) / scan, vr = v;
                double fl = prev_v;
                for (int it = 0; it < 60; ++it) {
                    const double vm = 0.5 * (vl + vr);
                    const double fm = poly::eval(dcell, vm);
                    if ((fl <= 0.0 && fm <= 0.0) || (fl >= 0.0 && fm >= 0.0)) {
                        vl = vm;
                        fl = fm;
                    } else {
                        vr = vm;
                    }
                }
                consider(poly::eval(cell, 0.5 * (vl + vr)));
            }
            prev_v = cur;
        }
    }
    return {lo, hi};
}

template <typename SFunc>
std::pair<double, double> extrema_grid(const SFunc& s, double a, int grid_per_unit) {
    const int n = std::max(100, static_cast<int>(std::lround(grid_per_unit * std::max(a, 1.0))));
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i < n; ++i) {
        // midpoints: the scan must not land on breakpoints, where pointwise
        // values differ from the a.e. ones
        const double x = -0.5 * a + a * (i + 0.5) / n;
        const double v = s(x);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {lo, hi};
}

} // namespace

std::pair<double, double> numeric_periodization_extrema(const BSplineWindow& w, double a,
                                                        int grid_per_unit) {
    if (a <= 0.0) throw domain_error("numeric_periodization_extrema: a must be positive");
    if (grid_per_unit < 100)
        throw domain_error("numeric_periodization_extrema: grid_per_unit must be >= 100");
    auto exact = extrema_exact_bspline(w, a);
    auto scanned = extrema_grid([&](double x) { return periodization(w, a, x); }, a,
                                std::min(grid_per_unit, 512));
    return {std::min(exact.first, scanned.first), std::max(exact.second, scanned.second)};
}

std::pair<double, double> numeric_periodization_extrema(const SobolevWindow& w, double a,
                                                        int grid_per_unit) {
    if (a <= 0.0) throw domain_error("numeric_periodization_extrema: a must be positive");
    if (grid_per_unit < 100)
        throw domain_error("numeric_periodization_extrema: grid_per_unit must be >= 100");
    return extrema_grid([&](double x) { return periodization(w, a, x); }, a, grid_per_unit);
}

namespace {

template <typename SAtGrid>
PeriodizationCheck check_impl(const SAtGrid& fill, const LatticeParams& lat,
                              const FrameBounds& bounds, int grid_per_unit) {
    if (grid_per_unit < 100)
        throw domain_error("check_necessary_condition: grid_per_unit must be >= 100");
    const double a = lat.a;
    const int n = std::max(100, static_cast<int>(std::lround(grid_per_unit * std::max(a, 1.0))));
    const double dx = a / n;
    const double x0 = -0.5 * a + 0.5 * dx;
    std::vector<double> s(n);
    fill(x0, dx, s.data(), s.size());

    PeriodizationCheck rep;
    const auto [lo, hi] = kernels::minmax(s.data(), s.size());
    rep.min_value = lo;
    rep.max_value = hi;
    const double want_lo = bounds.lower * lat.b;
    const double want_hi = bounds.upper * lat.b;
    rep.lower_margin = lo - want_lo;
    rep.upper_margin = want_hi - hi;
    const double eps = 1e-12 * std::max({1.0, want_lo, want_hi});
    for (int i = 0; i < n && rep.violations.size() < 16; ++i) {
        if (s[i] < want_lo - eps || s[i] > want_hi + eps)
            rep.violations.push_back(x0 + dx * i);
    }
    rep.ok = rep.violations.empty();
    return rep;
}

} // namespace

PeriodizationCheck check_necessary_condition(const BSplineWindow& w,
                                             const LatticeParams& lat,
                                             const FrameBounds& bounds,
                                             int grid_per_unit) {
    return check_impl(
        [&](double x0, double dx, double* out, std::size_t n) {
            periodization_on_grid(w, lat.a, x0, dx, out, n);
        },
        lat, bounds, grid_per_unit);
}

PeriodizationCheck check_necessary_condition(const SobolevWindow& w,
                                             const LatticeParams& lat,
                                             const FrameBounds& bounds,
                                             int grid_per_unit) {
    return check_impl(
        [&](double x0, double dx, double* out, std::size_t n) {
            for (std::size_t i = 0; i < n; ++i)
                out[i] = periodization(w, lat.a, x0 + dx * static_cast<double>(i));
        },
        lat, bounds, grid_per_unit);
}

} // namespace gabor
