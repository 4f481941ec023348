#ifndef GABOR_BSPLINE_HPP
#define GABOR_BSPLINE_HPP

#include <complex>
#include <span>
#include <vector>

namespace gabor {

/// Cardinal B-spline of order p: the p-fold self-convolution of the unit
/// rectangle, a piecewise polynomial of degree p-1 supported on [-p/2, p/2].
///
/// Pieces live on the unit intervals [-p/2 + i, -p/2 + i + 1], i = 0..p-1,
/// and are stored in coordinates local to each interval's left endpoint
/// (ascending powers). The truncated-power expansion is only used once, in
/// extended precision, to generate the coefficients; evaluating that raw form
/// directly would cancel catastrophically for larger p.
class BSplineWindow {
public:
    /// Throws domain_error unless 1 <= order <= max_order.
    explicit BSplineWindow(int order);

    static constexpr int max_order = 32;

    int order() const { return order_; }
    double half_support() const { return 0.5 * order_; }
    int piece_count() const { return order_; }
    double piece_left(int i) const { return -half_support() + i; }
    std::span<const double> piece(int i) const { return pieces_[i]; }

    /// Piecewise value; 0 outside [-p/2, p/2]. Pieces are taken right-open
    /// except the last, so rect(+-1/2) = 1 for p = 1.
    double eval(double x) const;
    double operator()(double x) const { return eval(x); }

    /// One-sided derivative (right-sided at interior breakpoints).
    double deriv(double x) const;

    /// Index of the piece whose closed-open interval contains x, or -1.
    int piece_index(double x) const;

private:
    int order_;
    std::vector<std::vector<double>> pieces_;
    std::vector<std::vector<double>> deriv_pieces_;
};

inline BSplineWindow build_window(int order) { return BSplineWindow(order); }

/// Independent route to rect^(p)(x): apply the moving-average identity
/// rect^(p)(x) = integral of rect^(p-1) over [x-1/2, x+1/2] recursively,
/// carrying each level as Gauss-Legendre node values per unit cell and
/// integrating the interpolants exactly. Never touches the coefficient
/// expansion above; serves as the oracle for BSplineWindow::eval.
double eval_by_recursion(int order, double x, int quad_points = 64);

/// integral of rect^(p)(t) e^{-i omega t} over [lo, hi], closed form per
/// piece. omega in radians per unit t; the omega -> 0 limit is the plain
/// polynomial integral. Requires lo <= hi.
std::complex<double> oscillatory_integral(const BSplineWindow& w, double omega,
                                          double lo, double hi);

/// sinc(xi)^p with sinc(t) = sin(pi t)/(pi t), sinc(0) = 1: the Fourier
/// transform of rect^(p) at frequency xi (cycles per unit).
double fourier_sinc(int order, double xi);

} // namespace gabor

#endif
