// AVX2+FMA kernel backend. Compiled with -mavx2 -mfma in its own translation
// unit; only ever dispatched to after a CPUID check.

#include "gabor/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace gabor::kernels {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double sum_sq_avx2(const double* x, std::size_t n) { return dot_avx2(x, x, n); }

double sum_abs2_avx2(const cplx* x, std::size_t n) {
    // |z|^2 summed over the array is the plain sum of squares of the
    // interleaved doubles.
    return sum_sq_avx2(reinterpret_cast<const double*>(x), 2 * n);
}

cplx cdot_avx2(const cplx* x, const cplx* y, std::size_t n) {
    const double* xd = reinterpret_cast<const double*>(x);
    const double* yd = reinterpret_cast<const double*>(y);
    const __m256d sign = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        acc_re = _mm256_fmadd_pd(xv, yv, acc_re);
        // lanes of x*swap(y): (xr*yi, xi*yr); signed sum gives xr*yi - xi*yr
        const __m256d ys = _mm256_mul_pd(_mm256_permute_pd(yv, 0b0101), sign);
        acc_im = _mm256_fmadd_pd(xv, ys, acc_im);
    }
    double re = hsum(acc_re), im = hsum(acc_im);
    for (; i < n; ++i) {
        re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
    }
    return {re, im};
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d yv = _mm256_loadu_pd(y + i);
        yv = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), yv);
        _mm256_storeu_pd(y + i, yv);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void caxpy_avx2(cplx a, const cplx* x, cplx* y, std::size_t n) {
    const double* xd = reinterpret_cast<const double*>(x);
    double* yd = reinterpret_cast<double*>(y);
    const __m256d ar = _mm256_set1_pd(a.real());
    const __m256d ai_signed = _mm256_setr_pd(-a.imag(), a.imag(), -a.imag(), a.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
        __m256d yv = _mm256_loadu_pd(yd + 2 * i);
        yv = _mm256_fmadd_pd(ar, xv, yv);
        yv = _mm256_fmadd_pd(ai_signed, _mm256_permute_pd(xv, 0b0101), yv);
        _mm256_storeu_pd(yd + 2 * i, yv);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

std::pair<double, double> minmax_avx2(const double* x, std::size_t n) {
    if (n == 0) return {0.0, 0.0};
    if (n < 8) {
        double lo = x[0], hi = x[0];
        for (std::size_t i = 1; i < n; ++i) {
            if (x[i] < lo) lo = x[i];
            if (x[i] > hi) hi = x[i];
        }
        return {lo, hi};
    }
    __m256d vlo = _mm256_loadu_pd(x);
    __m256d vhi = vlo;
    std::size_t i = 4;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        vlo = _mm256_min_pd(vlo, v);
        vhi = _mm256_max_pd(vhi, v);
    }
    if (i < n) { // overlapping final block
        const __m256d v = _mm256_loadu_pd(x + n - 4);
        vlo = _mm256_min_pd(vlo, v);
        vhi = _mm256_max_pd(vhi, v);
    }
    alignas(32) double tlo[4], thi[4];
    _mm256_store_pd(tlo, vlo);
    _mm256_store_pd(thi, vhi);
    double lo = tlo[0], hi = thi[0];
    for (int k = 1; k < 4; ++k) {
        if (tlo[k] < lo) lo = tlo[k];
        if (thi[k] > hi) hi = thi[k];
    }
    return {lo, hi};
}

inline __m256d horner4(const double* c, std::size_t nc, __m256d xv) {
    __m256d r = _mm256_set1_pd(c[nc - 1]);
    for (std::size_t k = nc - 1; k-- > 0;)
        r = _mm256_fmadd_pd(r, xv, _mm256_set1_pd(c[k]));
    return r;
}

void poly_eval_range_avx2(const double* c, std::size_t nc, double x0, double dx,
                          double* out, std::size_t n) {
    if (nc == 0) return;
    const __m256d step = _mm256_set1_pd(4.0 * dx);
    __m256d xv = _mm256_setr_pd(x0, x0 + dx, x0 + 2 * dx, x0 + 3 * dx);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, horner4(c, nc, xv));
        xv = _mm256_add_pd(xv, step);
    }
    for (; i < n; ++i) {
        const double x = x0 + static_cast<double>(i) * dx;
        double r = 0.0;
        for (std::size_t k = nc; k-- > 0;) r = r * x + c[k];
        out[i] = r;
    }
}

void poly_accum_range_avx2(const double* c, std::size_t nc, double x0, double dx,
                           double scale, double* out, std::size_t n) {
    if (nc == 0) return;
    const __m256d step = _mm256_set1_pd(4.0 * dx);
    const __m256d sv = _mm256_set1_pd(scale);
    __m256d xv = _mm256_setr_pd(x0, x0 + dx, x0 + 2 * dx, x0 + 3 * dx);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d yv = _mm256_loadu_pd(out + i);
        _mm256_storeu_pd(out + i, _mm256_fmadd_pd(sv, horner4(c, nc, xv), yv));
        xv = _mm256_add_pd(xv, step);
    }
    for (; i < n; ++i) {
        const double x = x0 + static_cast<double>(i) * dx;
        double r = 0.0;
        for (std::size_t k = nc; k-- > 0;) r = r * x + c[k];
        out[i] += scale * r;
    }
}

} // namespace

const Table avx2_table = {
    "avx2",         dot_avx2,   sum_sq_avx2, sum_abs2_avx2,
    cdot_avx2,      axpy_avx2,  caxpy_avx2,  minmax_avx2,
    poly_eval_range_avx2, poly_accum_range_avx2,
};

} // namespace gabor::kernels

#else

namespace gabor::kernels {
// Built without AVX2 support: expose a stub the dispatcher will skip.
const Table avx2_table = {nullptr, nullptr, nullptr, nullptr, nullptr,
                          nullptr, nullptr, nullptr, nullptr, nullptr};
} // namespace gabor::kernels

#endif
