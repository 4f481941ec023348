#include "gabor/kernels.hpp"

// Reference kernels. Plain loops, fixed accumulation order; the SIMD
// variants are checked against these.

namespace gabor::kernels {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

double sum_sq_scalar(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

double sum_abs2_scalar(const cplx* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return acc;
}

cplx cdot_scalar(const cplx* x, const cplx* y, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
        im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
    }
    return {re, im};
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void caxpy_scalar(cplx a, const cplx* x, cplx* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

std::pair<double, double> minmax_scalar(const double* x, std::size_t n) {
    if (n == 0) return {0.0, 0.0};
    double lo = x[0], hi = x[0];
    for (std::size_t i = 1; i < n; ++i) {
        if (x[i] < lo) lo = x[i];
        if (x[i] > hi) hi = x[i];
    }
    return {lo, hi};
}

void poly_eval_range_scalar(const double* c, std::size_t nc, double x0, double dx,
                            double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double x = x0 + static_cast<double>(i) * dx;
        double r = 0.0;
        for (std::size_t k = nc; k-- > 0;) r = r * x + c[k];
        out[i] = r;
    }
}

void poly_accum_range_scalar(const double* c, std::size_t nc, double x0, double dx,
                             double scale, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double x = x0 + static_cast<double>(i) * dx;
        double r = 0.0;
        for (std::size_t k = nc; k-- > 0;) r = r * x + c[k];
        out[i] += scale * r;
    }
}

} // namespace

const Table scalar_table = {
    "scalar",         dot_scalar,   sum_sq_scalar, sum_abs2_scalar,
    cdot_scalar,      axpy_scalar,  caxpy_scalar,  minmax_scalar,
    poly_eval_range_scalar, poly_accum_range_scalar,
};

} // namespace gabor::kernels
