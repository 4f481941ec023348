#ifndef GABOR_VERIFIER_HPP
#define GABOR_VERIFIER_HPP

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gabor/bspline.hpp"
#include "gabor/stability.hpp"

namespace gabor {

using cplx = std::complex<double>;

/// One member of a (possibly perturbed) Gabor family:
/// t -> e^{2 pi i freq t} window(t - shift).
struct AtomSpec {
    double freq = 0.0;  // cycles per unit time (b * lambda)
    double shift = 0.0; // time position (a * mu)
    std::shared_ptr<const BSplineWindow> window;
};

struct GramMatrix {
    std::size_t dim = 0;
    std::vector<cplx> entries; // row-major, Hermitian

    cplx& at(std::size_t i, std::size_t j) { return entries[i * dim + j]; }
    const cplx& at(std::size_t i, std::size_t j) const { return entries[i * dim + j]; }
};

/// Exact inner product of two atoms: the window product is expanded over the
/// merged breakpoint lattice and each cell is integrated in closed form.
cplx gram_entry(const AtomSpec& x, const AtomSpec& y);

/// Hermitian Gram of a finite family; entries are independent, so assembly
/// parallelizes over rows without affecting the result.
GramMatrix build_gram(const std::vector<AtomSpec>& atoms, int threads = 1);

/// Smallest and largest eigenvalue. Dense Hermitian solve up to dense_limit,
/// a Lanczos run (full reorthogonalization, bounds both ends) above that
/// (Ritz residual <= tol, throws numeric_error with the last residual if it
/// fails to converge). Gabor Gram spectra cluster near their extremes, which
/// defeats plain power iteration; the Krylov route converges there too, but
/// the dense path is preferred wherever it is affordable.
std::pair<double, double> gram_spectrum_extrema(const GramMatrix& g, double tol = 1e-10,
                                                std::size_t dense_limit = 2048);

/// || sum_k alpha_k (rect(t - a k) - rect(t - a mu_k)) ||_2^2 computed exactly:
/// the function is piecewise constant, so the breakpoint cells are summed
/// directly. Index k runs over 0..n-1 with mus[k] the perturbed slot of k.
double exact_perturbation_norm(double a, std::span<const cplx> alphas,
                               std::span<const double> mus);

/// Randomized lower bound on the squared operator norm of the modulated
/// B-spline difference family: per trial a jitter realization attaining the
/// per-row sup is drawn, the difference-atom Gram over shifts |k| <= k_range
/// is assembled in closed form, and its top eigenvalue is the trial value.
/// Returns the max over trials; it must never exceed 4 a L.
double perturbation_operator_norm_bspline(int order, const LatticeParams& lat,
                                          const JitterProfile& jit, int trials,
                                          std::uint64_t seed, long k_range = 8);

// ---------------------------------------------------------------------------
// Family realizations
// ---------------------------------------------------------------------------

/// A concrete draw of a jittered family on rows |n| <= n_max and shifts
/// |k| <= k_max: time slots mu_{n,k} = k + delta with |delta| <= L_n (one k
/// per row attains the sup, so the realized total equals the budget), and
/// modulation slots lambda_n = n + delta' with |delta'| <= freq_sup.
struct FamilyRealization {
    int order = 1;
    LatticeParams lat;
    long n_max = 0, k_max = 0;
    std::shared_ptr<const BSplineWindow> window;
    std::vector<double> lambda; // size 2 n_max + 1, index n + n_max
    std::vector<double> mu;     // size (2 n_max + 1)(2 k_max + 1), row-major in (n, k)
    std::vector<AtomSpec> atoms;
    std::vector<std::pair<long, long>> idx; // (n, k) per atom
    double realized_total = 0.0;            // sum_n sup_k |mu_{n,k} - k|

    double& mu_at(long n, long k) {
        return mu[static_cast<std::size_t>((n + n_max) * (2 * k_max + 1) + (k + k_max))];
    }
    double mu_at(long n, long k) const {
        return mu[static_cast<std::size_t>((n + n_max) * (2 * k_max + 1) + (k + k_max))];
    }
};

/// symmetric_rows ties row -n to row n (same time slots, mirrored modulation),
/// which keeps real signals reconstructible with real output.
FamilyRealization realize_family(int order, const LatticeParams& lat,
                                 const JitterProfile& jit, long n_max, long k_max,
                                 std::uint64_t seed, bool symmetric_rows = false);

// ---------------------------------------------------------------------------
// Certificate verification
// ---------------------------------------------------------------------------

struct CheckResult {
    std::string name;
    bool pass = false;
    std::size_t size = 0;
    double observed_min = 0.0;
    double observed_max = 0.0;
    double bound_lower = 0.0;
    double bound_upper = 0.0;
    double margin = 0.0; // smallest slack; negative = violated
};

struct VerificationReport {
    std::uint64_t seed = 0;
    double tol = 0.0;
    bool pass = false;
    std::vector<CheckResult> checks;
    std::string note;
};

struct VerifyOptions {
    double tol = 1e-6;
    /// Row truncation makes the analysis-energy route see slightly less than
    /// the full frame sum; this is its dedicated allowance.
    double analysis_tol = 1e-3;
    int subfamilies = 4;
    int test_signals = 3;
    int grid_per_unit = 64;
    std::uint64_t seed = 1;
    int threads = 1;
};

/// Falsify-or-confirm a satisfied certificate against a finite family drawn
/// from the certified system. Riesz certificates must contain every sampled
/// subfamily spectrum in [A - tol, B + tol] (finite subfamilies of a Riesz
/// basis inherit the bounds). Frame certificates only inherit the upper
/// bound; the lower bound is checked through analysis energy of test signals
/// synthesized well inside the sampled index range.
VerificationReport verify_certificate(const Certificate& cert,
                                      const std::vector<AtomSpec>& family,
                                      const VerifyOptions& opt);
VerificationReport verify_certificate(const Certificate& cert,
                                      const std::vector<AtomSpec>& family, double tol);

// ---------------------------------------------------------------------------
// Discretized frame operator + frame algorithm
// ---------------------------------------------------------------------------

struct DiscretizedAtom {
    long start = 0; // grid index of the first sample
    std::vector<cplx> values;
};

struct DiscretizedFamily {
    double t0 = 0.0;
    double dt = 0.0;
    std::size_t length = 0;
    std::vector<DiscretizedAtom> atoms;
};

DiscretizedFamily discretize_family(const std::vector<AtomSpec>& atoms, double t0,
                                    double dt, std::size_t length);

/// c_j = dt * sum_i conj(g_j[i]) f[i] over the atom's support segment.
std::vector<cplx> analysis_coefficients(const DiscretizedFamily& fam,
                                        std::span<const cplx> f);

/// out += sum_j c_j g_j (out must hold fam.length entries).
void synthesize(const DiscretizedFamily& fam, std::span<const cplx> coeffs, cplx* out);

struct ReconstructionResult {
    std::vector<cplx> signal;       // final iterate
    std::vector<double> rel_errors; // vs reference, per iteration
    std::vector<double> ratios;     // rel_errors[m+1] / rel_errors[m]
};

/// Frame algorithm f_{m+1} = f_m + 2/(A+B) (S f - S f_m), where S f is the
/// synthesis of the given analysis coefficients. Convergence ratio is
/// certified to be at most (B-A)/(B+A) once in the asymptotic regime; three
/// consecutive expanding steps raise numeric_error (inconsistent bounds).
ReconstructionResult frame_reconstruct(const DiscretizedFamily& fam,
                                       std::span<const cplx> coeffs,
                                       const FrameBounds& bounds,
                                       std::span<const cplx> reference, int iters);

// ---------------------------------------------------------------------------
// Fourier-side (sinc) atoms for the duality check
// ---------------------------------------------------------------------------

/// t -> e^{2 pi i mod_freq t} sinc^power(t - center).
struct SincAtom {
    int power = 1;
    double mod_freq = 0.0;
    double center = 0.0;
};

/// Gram of a sinc family by direct quadrature over [-half_width, half_width]
/// (composite Gauss-Legendre per unit cell) plus, for power 1, the closed-form
/// correction for the non-oscillatory part of the tail. Used to confirm that
/// Fourier-side Grams match the time-side closed forms.
GramMatrix sinc_gram_quadrature(const std::vector<SincAtom>& atoms,
                                double half_width = 64.0, int nodes_per_unit = 24);

} // namespace gabor

#endif
