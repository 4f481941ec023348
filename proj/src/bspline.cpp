#include "gabor/bspline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "gabor/errors.hpp"
#include "gabor/poly.hpp"
#include "gabor/quadrature.hpp"

namespace gabor {

namespace {

std::vector<std::vector<long double>> pascal_triangle(int n) {
    std::vector<std::vector<long double>> c(n + 1);
    for (int i = 0; i <= n; ++i) {
        c[i].assign(i + 1, 1.0L);
        for (int j = 1; j < i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
    }
    return c;
}

long double ipow(long double base, int e) {
    if (e == 0) return 1.0L; // includes 0^0 in the expansion below
    long double r = 1.0L;
    for (int k = 0; k < e; ++k) r *= base;
    return r;
}

} // namespace

BSplineWindow::BSplineWindow(int order) : order_(order) {
    if (order < 1 || order > max_order)
        throw domain_error("BSplineWindow: order must be in [1, " +
                           std::to_string(max_order) + "], got " + std::to_string(order));
    const int p = order;
    const auto binom = pascal_triangle(p);
    long double fact = 1.0L;
    for (int k = 2; k < p; ++k) fact *= k;

    pieces_.resize(p);
    // Piece i on [-p/2 + i, -p/2 + i + 1], local u = x - left. The truncated
    // powers active there are j = 0..i, each contributing (u + (i - j))^{p-1}.
    for (int i = 0; i < p; ++i) {
        std::vector<long double> coeff(p, 0.0L);
        for (int j = 0; j <= i; ++j) {
            const long double sgn = (j % 2 == 0) ? 1.0L : -1.0L;
            const long double cpj = binom[p][j];
            const long double base = static_cast<long double>(i - j);
            for (int m = 0; m < p; ++m)
                coeff[m] += sgn * cpj * binom[p - 1][m] * ipow(base, p - 1 - m);
        }
        pieces_[i].resize(p);
        for (int m = 0; m < p; ++m)
            pieces_[i][m] = static_cast<double>(coeff[m] / fact);
    }

    deriv_pieces_.resize(p);
    for (int i = 0; i < p; ++i)
        deriv_pieces_[i] = poly::derivative(pieces_[i]);
}

int BSplineWindow::piece_index(double x) const {
    const double h = half_support();
    if (x < -h || x > h) return -1;
    int i = static_cast<int>(std::floor(x + h));
    if (i >= order_) i = order_ - 1; // x == +p/2 closes the final piece
    if (i < 0) i = 0;
    return i;
}

double BSplineWindow::eval(double x) const {
    const int i = piece_index(x);
    if (i < 0) return 0.0;
    return poly::eval(pieces_[i], x - piece_left(i));
}

double BSplineWindow::deriv(double x) const {
    const int i = piece_index(x);
    if (i < 0) return 0.0;
    return poly::eval(deriv_pieces_[i], x - piece_left(i));
}

// ---------------------------------------------------------------------------
// Recursion oracle
// ---------------------------------------------------------------------------

namespace {

// One convolution level: node values of rect^(k) on each of its k unit cells,
// at Gauss-Legendre nodes mapped into the cell.
struct CascadeLevel {
    int order;
    std::vector<std::vector<double>> cell_values; // [cell][node]
};

struct Cascade {
    int n_nodes;
    std::vector<double> nodes01;    // GL nodes mapped to [0, 1]
    std::vector<double> bary;       // barycentric weights for nodes01
    GaussRule rule;
    std::vector<CascadeLevel> levels; // levels[k-1] holds rect^(k)
};

double bary_interp(const Cascade& c, std::span<const double> values, double t01) {
    double num = 0.0, den = 0.0;
    for (int j = 0; j < c.n_nodes; ++j) {
        const double d = t01 - c.nodes01[j];
        if (d == 0.0) return values[j];
        const double q = c.bary[j] / d;
        num += q * values[j];
        den += q;
    }
    return num / den;
}

// Value of rect^(k) at x from its stored node values (0 outside support).
double level_eval(const Cascade& c, const CascadeLevel& lv, double x) {
    const double h = 0.5 * lv.order;
    if (x < -h || x > h) return 0.0;
    int cell = static_cast<int>(std::floor(x + h));
    if (cell >= lv.order) cell = lv.order - 1;
    if (cell < 0) cell = 0;
    return bary_interp(c, lv.cell_values[cell], x - (-h + cell));
}

// integral of rect^(k) over [a, b], splitting at its unit-cell breakpoints so
// each sub-integral sees a single polynomial interpolant.
double level_integral(const Cascade& c, const CascadeLevel& lv, double a, double b) {
    const double h = 0.5 * lv.order;
    a = std::max(a, -h);
    b = std::min(b, h);
    if (b <= a) return 0.0;
    double acc = 0.0;
    int cell_lo = std::clamp(static_cast<int>(std::floor(a + h)), 0, lv.order - 1);
    int cell_hi = std::clamp(static_cast<int>(std::floor(b + h)), 0, lv.order - 1);
    for (int cell = cell_lo; cell <= cell_hi; ++cell) {
        const double lo = std::max(a, -h + cell);
        const double hi = std::min(b, -h + cell + 1);
        if (hi <= lo) continue;
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        double s = 0.0;
        for (int q = 0; q < c.n_nodes; ++q) {
            const double x = mid + half * c.rule.nodes[q];
            s += c.rule.weights[q] *
                 bary_interp(c, lv.cell_values[cell], x - (-h + cell));
        }
        acc += s * half;
    }
    return acc;
}

Cascade build_cascade(int p, int n_nodes) {
    Cascade c;
    c.n_nodes = n_nodes;
    c.rule = gauss_legendre(n_nodes);
    c.nodes01.resize(n_nodes);
    for (int j = 0; j < n_nodes; ++j) c.nodes01[j] = 0.5 * (c.rule.nodes[j] + 1.0);
    c.bary.resize(n_nodes);
    for (int j = 0; j < n_nodes; ++j) {
        double w = 1.0;
        for (int k = 0; k < n_nodes; ++k)
            if (k != j) w /= (c.nodes01[j] - c.nodes01[k]);
        c.bary[j] = w;
    }

    CascadeLevel base;
    base.order = 1;
    base.cell_values.assign(1, std::vector<double>(n_nodes, 1.0));
    c.levels.push_back(std::move(base));

    for (int k = 2; k <= p; ++k) {
        const CascadeLevel& prev = c.levels.back();
        CascadeLevel next;
        next.order = k;
        next.cell_values.assign(k, std::vector<double>(n_nodes));
        const double h = 0.5 * k;
        for (int cell = 0; cell < k; ++cell) {
            for (int j = 0; j < n_nodes; ++j) {
                const double x = -h + cell + c.nodes01[j];
                next.cell_values[cell][j] = level_integral(c, prev, x - 0.5, x + 0.5);
            }
        }
        c.levels.push_back(std::move(next));
    }
    return c;
}

const Cascade& cached_cascade(int p, int n_nodes) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, Cascade> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(p, n_nodes);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, build_cascade(p, n_nodes)).first;
    return it->second;
}

} // namespace

double eval_by_recursion(int order, double x, int quad_points) {
    if (order < 1 || order > BSplineWindow::max_order)
        throw domain_error("eval_by_recursion: invalid order " + std::to_string(order));
    if (quad_points < 4 || quad_points > 256)
        throw domain_error("eval_by_recursion: quad_points must be in [4, 256]");
    if (order == 1) return (x >= -0.5 && x <= 0.5) ? 1.0 : 0.0;
    const Cascade& c = cached_cascade(order, quad_points);
    return level_eval(c, c.levels.back(), x);
}

// ---------------------------------------------------------------------------

std::complex<double> oscillatory_integral(const BSplineWindow& w, double omega,
                                          double lo, double hi) {
    if (lo > hi) throw domain_error("oscillatory_integral: lo > hi");
    const double h = w.half_support();
    const double a = std::max(lo, -h);
    const double b = std::min(hi, h);
    if (b <= a) return {0.0, 0.0};
    std::complex<double> acc(0.0, 0.0);
    for (int i = 0; i < w.piece_count(); ++i) {
        const double left = w.piece_left(i);
        const double alpha = std::max(a, left);
        const double beta = std::min(b, left + 1.0);
        if (beta <= alpha) continue;
        const std::complex<double> phase =
            std::exp(std::complex<double>(0.0, -omega * left));
        acc += phase * poly::osc_integral(w.piece(i), alpha - left, beta - left, omega);
    }
    return acc;
}

double fourier_sinc(int order, double xi) {
    if (order < 1) throw domain_error("fourier_sinc: order must be positive");
    const double s = (xi == 0.0) ? 1.0 : std::sin(M_PI * xi) / (M_PI * xi);
    return std::pow(s, order);
}

} // namespace gabor
