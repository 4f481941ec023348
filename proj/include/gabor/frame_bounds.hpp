#ifndef GABOR_FRAME_BOUNDS_HPP
#define GABOR_FRAME_BOUNDS_HPP

#include <functional>
#include <string>
#include <vector>

#include "gabor/bspline.hpp"

namespace gabor {

/// Time step a and frequency step b of a regular lattice. ab <= 1 is
/// necessary for the system to be a frame at all.
struct LatticeParams {
    double a = 1.0;
    double b = 1.0;
};

enum class BoundsKind { certified_lower_upper, exact, numerical_estimate };

struct FrameBounds {
    double lower = 0.0; // A
    double upper = 0.0; // B
    BoundsKind kind = BoundsKind::certified_lower_upper;
};

const char* to_string(BoundsKind kind);

/// Compactly supported continuous window psi with the data the Sobolev-window
/// bounds need: support radius p/2, min/max of psi over [-a/2, a/2] for the
/// lattice it will be paired with, and the squared L2 norm of psi'.
/// `estimated` marks values recovered from a sample table rather than
/// supplied in closed form; bounds derived from them are downgraded to
/// numerical_estimate.
struct SobolevWindow {
    double half_support = 0.0; // p/2
    std::function<double(double)> evaluator;
    double deriv_l2_sq = 0.0;
    double m = 0.0;
    double M = 0.0;
    bool estimated = false;
};

/// psi(x) = cos(pi x / p) on (-p/2, p/2): m = cos(pi a / (2 p)), M = 1,
/// ||psi'||^2 = pi^2 / (2 p).
SobolevWindow cosine_window(double support_p, double a);

/// Recover a SobolevWindow from a uniform sample table (linear interpolation;
/// m, M from a grid scan of [-a/2, a/2]; ||psi'||^2 by central differences
/// plus trapezoid). Marked estimated.
SobolevWindow sobolev_from_samples(double t0, double dt, std::vector<double> samples,
                                   double a);

/// floor with an exactness guard: values within 1e-12 of an integer snap to
/// it first, so lattices like a = p/k land on the intended integer.
double snap_floor(double x);

/// Periodization S(a, x) = sum_n g(x - a n)^2 (finitely many terms by compact
/// support). Periodic with period a.
double periodization(const BSplineWindow& w, double a, double x);
double periodization(const SobolevWindow& w, double a, double x);

/// S(a, x) evaluated at x0 + i*dx, i = 0..n-1, accumulated piecewise through
/// the squared-polynomial kernels.
void periodization_on_grid(const BSplineWindow& w, double a, double x0, double dx,
                           double* out, std::size_t n);

/// Certified frame bounds of the unperturbed B-spline system:
/// A = rect^(p)(a/2)^2 / b, B = N(p,a)/b where N is the largest number of
/// translate supports covering a point (p/a when integer, floor(p/a)+1
/// otherwise). Requires 0 < a <= 1 for p = 1 (the translates leave gaps
/// otherwise), 0 < a < p for p >= 2, and ab <= 1.
FrameBounds translate_overlap_bounds(int order, const LatticeParams& lat);

/// min and max of the periodization over one period. For B-spline windows the
/// extrema are found exactly: the periodization is piecewise polynomial, so
/// each breakpoint cell contributes its endpoint limits and the roots of its
/// derivative. Generic windows fall back to a midpoint grid scan.
std::pair<double, double> numeric_periodization_extrema(const BSplineWindow& w, double a,
                                                        int grid_per_unit = 2048);
std::pair<double, double> numeric_periodization_extrema(const SobolevWindow& w, double a,
                                                        int grid_per_unit = 2048);

/// Exact bounds of the integer-lattice B-spline system (a = b = 1):
/// B = 1 and A = 2^{2p+1}/pi^{2p} * sum_{nu>=0} (2nu+1)^{-2p}. The series is
/// summed until the integral-comparison tail correction is below tol and the
/// correction is applied.
FrameBounds krein_favard_exact(int order, double tol = 1e-14);

/// Sobolev-window bounds A = m^2/b, B = [p/a] M^2/b. Requires p > a > 0,
/// ab <= 1 and m > 0 (a window not bounded below admits no certificate).
FrameBounds sobolev_bounds(const SobolevWindow& w, const LatticeParams& lat);

/// Result of scanning A b <= S(x) <= B b over one period.
struct PeriodizationCheck {
    bool ok = true;
    double min_value = 0.0;
    double max_value = 0.0;
    double lower_margin = 0.0; // min S - A b; negative means violated
    double upper_margin = 0.0; // B b - max S
    std::vector<double> violations; // offending x (capped)
};

PeriodizationCheck check_necessary_condition(const BSplineWindow& w,
                                             const LatticeParams& lat,
                                             const FrameBounds& bounds,
                                             int grid_per_unit = 2048);
PeriodizationCheck check_necessary_condition(const SobolevWindow& w,
                                             const LatticeParams& lat,
                                             const FrameBounds& bounds,
                                             int grid_per_unit = 2048);

} // namespace gabor

#endif
