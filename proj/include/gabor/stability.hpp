#ifndef GABOR_STABILITY_HPP
#define GABOR_STABILITY_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gabor/frame_bounds.hpp"

namespace gabor {

/// Per-frequency-row time-jitter budget: row n holds L_n = sup_k |mu_{n,k} - k|.
/// Only nonzero rows are stored; the total is recomputed on every mutation.
/// freq_sup is the frequency-jitter bound sup_n |lambda_n - n|.
class JitterProfile {
public:
    JitterProfile() = default;

    /// L must lie in [0, 1); 0 erases the row.
    void set_row(long n, double L);
    double row(long n) const;
    const std::map<long, double>& rows() const { return rows_; }
    double total() const { return total_; }

    double freq_sup = 0.0;

    static JitterProfile single_row(double L, long n = 0);

    /// Spread a summed budget over as few rows as the per-row cap allows.
    static JitterProfile from_total(double L);

private:
    std::map<long, double> rows_;
    double total_ = 0.0;
};

struct RelativeFactors {
    double lower = 1.0;
    double upper = 1.0;
};

struct TensorDim {
    LatticeParams lat;
    double total_jitter = 0.0; // summed row budget for that coordinate
};

/// A checked stability condition. `satisfied` is exactly condition_lhs <
/// condition_rhs (the underlying inequalities are strict; equality fails).
/// When satisfied, `factors` carries the dimensionless bound factors in the
/// form the estimates are usually quoted, and `absolute` carries base bounds
/// times those factors. Both conventions are reported because either alone is
/// ambiguous. riesz additionally requires ab = 1 (within 1e-12).
struct Certificate {
    std::string model;       // rect | bspline | combined | sinc | sobolev | tensor | frame-perturbation
    std::string base_source; // where the unperturbed bounds came from

    double condition_lhs = 0.0;
    double condition_rhs = 0.0;
    bool satisfied = false;
    bool riesz = false;
    std::optional<RelativeFactors> factors;
    std::optional<FrameBounds> absolute;

    // inputs echoed so a certificate file is self-describing
    int order = 0;
    LatticeParams lat;
    JitterProfile jitter;
    std::vector<TensorDim> dims; // tensor model only
    std::string window_desc;     // sobolev model only
};

/// Frame-perturbation step: a frame with bounds (A, B) stays a frame under a
/// perturbation of operator bound C < A, with bounds scaled by (1 -+
/// sqrt(C/A))^2. Riesz-ness of the base family is preserved; the returned
/// certificate leaves riesz to the caller, who knows the base family.
Certificate christensen_combine(const FrameBounds& base, double C);

/// Time-jittered rectangle system on lattice (a, b), 0 < a <= 1:
/// condition 4 a b L < 1. Riesz when ab = 1 and L < 1/4.
Certificate certify_rect(const LatticeParams& lat, const JitterProfile& jit);

/// Time-jittered order-p B-spline system: condition 4 a b L < rect^(p)(a/2)^2.
Certificate certify_bspline(int order, const LatticeParams& lat, const JitterProfile& jit);

/// Bound 2a(z+1)ell on the squared norm of a unit-coefficient combination of
/// perturbed-minus-original rectangle translates; z = 0 in the disjoint
/// ("gap") case a > 1, 0 < ell <= (a-1)/(2a), else z = [ell] + 1.
double perturbation_norm_bound(double a, double ell);

/// Frequency-jitter adjustment of known bounds for sup_n |lambda_n - n| <=
/// ell < 1/4: A' = A (cos(pi ell) - sin(pi ell)), B' = B (2 - cos + sin).
FrameBounds freq_jitter_adjust(const FrameBounds& base, double ell);

/// Combined time + frequency jitter for the order-p B-spline system:
/// condition 4 a b L < rect^(p)(a/2)^2 (cos(pi ell) - sin(pi ell)).
Certificate certify_combined(int order, const LatticeParams& lat, const JitterProfile& jit);

/// The Fourier-side family of modulated sinc^p translates; numerically
/// identical to certify_combined (Plancherel preserves frame bounds), only
/// the provenance differs.
Certificate certify_sinc(int order, const LatticeParams& lat, const JitterProfile& jit);

/// Sobolev window under time jitter: C^2 = b a^2 ||psi'||^2 sum_s [p/a + L_s]
/// L_s^2 must stay below m^2; bound factors (1 -+ C/m)^2. Frequency jitter is
/// not part of this certificate; jit.freq_sup is ignored.
Certificate certify_sobolev(const SobolevWindow& w, const LatticeParams& lat,
                            const JitterProfile& jit);

/// Tensor-product rectangle system on R^d: each coordinate needs
/// L_j < 1/(4 a_j b_j); factors multiply across coordinates.
Certificate certify_tensor(const std::vector<TensorDim>& dims);

} // namespace gabor

#endif
