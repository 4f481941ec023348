#include "gabor/stability.hpp"

#include <cmath>

#include "gabor/errors.hpp"

namespace gabor {

namespace {

bool unit_density(const LatticeParams& lat) {
    return std::abs(lat.a * lat.b - 1.0) <= 1e-12;
}

constexpr const char* kTranslateBase = "translate-overlap-bounds";

} // namespace

JitterProfile JitterProfile::from_total(double L) {
    if (L < 0.0) throw domain_error("JitterProfile: total budget must be nonnegative");
    JitterProfile j;
    long n = 0;
    while (L >= 0.875) {
        j.set_row(n++, 0.875);
        L -= 0.875;
    }
    if (L > 0.0) j.set_row(n, L);
    return j;
}

void JitterProfile::set_row(long n, double L) {
    if (L < 0.0 || L >= 1.0)
        throw domain_error("JitterProfile: row budget must lie in [0, 1)");
    if (L == 0.0)
        rows_.erase(n);
    else
        rows_[n] = L;
    total_ = 0.0;
    for (const auto& [k, v] : rows_) total_ += v;
}

double JitterProfile::row(long n) const {
    auto it = rows_.find(n);
    return it == rows_.end() ? 0.0 : it->second;
}

JitterProfile JitterProfile::single_row(double L, long n) {
    JitterProfile j;
    j.set_row(n, L);
    return j;
}

Certificate christensen_combine(const FrameBounds& base, double C) {
    if (C < 0.0) throw domain_error("christensen_combine: C must be nonnegative");
    Certificate cert;
    cert.model = "frame-perturbation";
    cert.base_source = "caller";
    cert.condition_lhs = C;
    cert.condition_rhs = base.lower;
    cert.satisfied = C < base.lower;
    if (cert.satisfied) {
        const double rho = std::sqrt(C / base.lower);
        cert.factors = RelativeFactors{(1.0 - rho) * (1.0 - rho), (1.0 + rho) * (1.0 + rho)};
        cert.absolute = FrameBounds{base.lower * cert.factors->lower,
                                    base.upper * cert.factors->upper, base.kind};
    }
    return cert;
}

double perturbation_norm_bound(double a, double ell) {
    if (a <= 0.0) throw domain_error("perturbation_norm_bound: a must be positive");
    if (ell < 0.0) throw domain_error("perturbation_norm_bound: ell must be nonnegative");
    double z;
    if (a > 1.0 && ell > 0.0 && ell <= (a - 1.0) / (2.0 * a))
        z = 0.0;
    else
        z = std::floor(ell) + 1.0;
    return 2.0 * a * (z + 1.0) * ell;
}

FrameBounds freq_jitter_adjust(const FrameBounds& base, double ell) {
    if (ell < 0.0 || ell >= 0.25)
        throw domain_error("freq_jitter_adjust: frequency jitter must satisfy "
                           "0 <= ell < 1/4");
    const double c = std::cos(M_PI * ell), s = std::sin(M_PI * ell);
    return FrameBounds{base.lower * (c - s), base.upper * (2.0 - c + s), base.kind};
}

namespace {

Certificate certify_bspline_core(int order, const LatticeParams& lat,
                                 const JitterProfile& jit, double ell,
                                 std::string model) {
    if (ell < 0.0 || ell >= 0.25)
        throw domain_error("certify: frequency jitter must satisfy 0 <= ell < 1/4");
    const FrameBounds base = translate_overlap_bounds(order, lat); // validates the range rules
    const BSplineWindow w(order);
    const double wa2 = w.eval(0.5 * lat.a);
    const double gamma = std::cos(M_PI * ell) - std::sin(M_PI * ell);
    const double total = jit.total();

    Certificate cert;
    cert.model = std::move(model);
    cert.base_source =
        (ell == 0.0) ? kTranslateBase : "freq-adjusted-translate-overlap-bounds";
    cert.order = order;
    cert.lat = lat;
    cert.jitter = jit;
    cert.jitter.freq_sup = ell;
    cert.condition_lhs = ((4.0 * lat.a) * lat.b) * total;
    cert.condition_rhs = (wa2 * wa2) * gamma;
    cert.satisfied = cert.condition_lhs < cert.condition_rhs;
    if (cert.satisfied) {
        const double r = 2.0 * std::sqrt((lat.a * lat.b * total) / gamma) / wa2;
        cert.factors = RelativeFactors{(1.0 - r) * (1.0 - r), (1.0 + r) * (1.0 + r)};
        const FrameBounds adjusted = freq_jitter_adjust(base, ell);
        cert.absolute = FrameBounds{adjusted.lower * cert.factors->lower,
                                    adjusted.upper * cert.factors->upper, base.kind};
        cert.riesz = unit_density(lat) && total < 0.25 && ell == 0.0;
    }
    return cert;
}

} // namespace

Certificate certify_rect(const LatticeParams& lat, const JitterProfile& jit) {
    return certify_bspline_core(1, lat, jit, 0.0, "rect");
}

Certificate certify_bspline(int order, const LatticeParams& lat, const JitterProfile& jit) {
    return certify_bspline_core(order, lat, jit, 0.0, "bspline");
}

Certificate certify_combined(int order, const LatticeParams& lat, const JitterProfile& jit) {
    return certify_bspline_core(order, lat, jit, jit.freq_sup, "combined");
}

Certificate certify_sinc(int order, const LatticeParams& lat, const JitterProfile& jit) {
    Certificate cert = certify_bspline_core(order, lat, jit, jit.freq_sup, "sinc");
    cert.base_source += " (Fourier side; bounds carried over unchanged)";
    return cert;
}

Certificate certify_sobolev(const SobolevWindow& w, const LatticeParams& lat,
                            const JitterProfile& jit) {
    const FrameBounds base = sobolev_bounds(w, lat); // validates p > a, m > 0, ab <= 1
    const double p = 2.0 * w.half_support;
    double csq = 0.0;
    for (const auto& [n, L] : jit.rows())
        csq += snap_floor(p / lat.a + L) * L * L;
    csq *= lat.b * lat.a * lat.a * w.deriv_l2_sq;

    Certificate cert;
    cert.model = "sobolev";
    cert.base_source = "sobolev-envelope-bounds";
    cert.lat = lat;
    cert.jitter = jit;
    cert.jitter.freq_sup = 0.0;
    cert.condition_lhs = csq;
    cert.condition_rhs = w.m * w.m;
    cert.satisfied = cert.condition_lhs < cert.condition_rhs;
    if (cert.satisfied) {
        const double r = std::sqrt(csq) / w.m;
        cert.factors = RelativeFactors{(1.0 - r) * (1.0 - r), (1.0 + r) * (1.0 + r)};
        cert.absolute = FrameBounds{base.lower * cert.factors->lower,
                                    base.upper * cert.factors->upper, base.kind};
        cert.riesz = unit_density(lat);
    }
    return cert;
}

Certificate certify_tensor(const std::vector<TensorDim>& dims) {
    if (dims.empty()) throw usage_error("certify_tensor: need at least one dimension");
    if (dims.size() == 1) {
        if (dims[0].total_jitter < 0.0)
            throw domain_error("certify_tensor: jitter budget must be nonnegative");
        Certificate cert = certify_bspline_core(
            1, dims[0].lat, JitterProfile::from_total(dims[0].total_jitter), 0.0, "tensor");
        cert.dims = dims;
        return cert;
    }

    Certificate cert;
    cert.model = "tensor";
    cert.base_source = kTranslateBase;
    cert.dims = dims;

    double lhs = 0.0;
    double flo = 1.0, fhi = 1.0;
    double alo = 1.0, ahi = 1.0;
    bool ok = true;
    for (const auto& d : dims) {
        const FrameBounds base = translate_overlap_bounds(1, d.lat);
        if (d.total_jitter < 0.0)
            throw domain_error("certify_tensor: jitter budget must be nonnegative");
        const double cond = ((4.0 * d.lat.a) * d.lat.b) * d.total_jitter;
        lhs = std::max(lhs, cond);
        ok = ok && cond < 1.0;
        if (ok) {
            const double r = 2.0 * std::sqrt(d.lat.a * d.lat.b * d.total_jitter);
            flo *= (1.0 - r) * (1.0 - r);
            fhi *= (1.0 + r) * (1.0 + r);
            alo *= base.lower;
            ahi *= base.upper;
        }
    }
    cert.condition_lhs = lhs;
    cert.condition_rhs = 1.0;
    cert.satisfied = ok;
    if (ok) {
        cert.factors = RelativeFactors{flo, fhi};
        cert.absolute = FrameBounds{alo * flo, ahi * fhi, BoundsKind::certified_lower_upper};
        bool riesz = true;
        for (const auto& d : dims)
            riesz = riesz && unit_density(d.lat) && d.total_jitter < 0.25;
        cert.riesz = riesz;
    }
    return cert;
}

} // namespace gabor
