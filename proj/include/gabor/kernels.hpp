#ifndef GABOR_KERNELS_HPP
#define GABOR_KERNELS_HPP

#include <complex>
#include <cstddef>
#include <string_view>
#include <utility>

// Data-parallel inner loops behind the grid scans, hold sums, and frame
// iterations. Every operation has a scalar reference implementation and an
// AVX2+FMA variant; the backend is picked at runtime from CPUID (override
// with set_backend or the GABOR_KERNELS environment variable). The variants
// are equivalence-tested against the scalar reference in tests/test_kernels.

namespace gabor::kernels {

using cplx = std::complex<double>;

struct Table {
    const char* name;

    double (*dot)(const double* x, const double* y, std::size_t n);
    double (*sum_sq)(const double* x, std::size_t n);
    double (*sum_abs2)(const cplx* x, std::size_t n);
    cplx (*cdot)(const cplx* x, const cplx* y, std::size_t n); // conj(x) . y
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    void (*caxpy)(cplx a, const cplx* x, cplx* y, std::size_t n);
    std::pair<double, double> (*minmax)(const double* x, std::size_t n);
    // out[i] = P(x0 + i*dx), coefficients ascending, degree = nc-1
    void (*poly_eval_range)(const double* c, std::size_t nc, double x0, double dx,
                            double* out, std::size_t n);
    // out[i] += scale * P(x0 + i*dx)
    void (*poly_accum_range)(const double* c, std::size_t nc, double x0, double dx,
                             double scale, double* out, std::size_t n);
};

extern const Table scalar_table;
#if defined(__x86_64__)
extern const Table avx2_table; // null-named stub when built without AVX2 support
#endif

/// Currently selected backend.
const Table& active();

/// "scalar", "avx2", or "auto". Throws usage_error for unknown names or
/// when the requested backend is unavailable on this machine.
void set_backend(std::string_view name);

inline double dot(const double* x, const double* y, std::size_t n) {
    return active().dot(x, y, n);
}
inline double sum_sq(const double* x, std::size_t n) { return active().sum_sq(x, n); }
inline double sum_abs2(const cplx* x, std::size_t n) { return active().sum_abs2(x, n); }
inline cplx cdot(const cplx* x, const cplx* y, std::size_t n) {
    return active().cdot(x, y, n);
}
inline void axpy(double a, const double* x, double* y, std::size_t n) {
    active().axpy(a, x, y, n);
}
inline void caxpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
    active().caxpy(a, x, y, n);
}
inline std::pair<double, double> minmax(const double* x, std::size_t n) {
    return active().minmax(x, n);
}
inline void poly_eval_range(const double* c, std::size_t nc, double x0, double dx,
                            double* out, std::size_t n) {
    active().poly_eval_range(c, nc, x0, dx, out, n);
}
inline void poly_accum_range(const double* c, std::size_t nc, double x0, double dx,
                             double scale, double* out, std::size_t n) {
    active().poly_accum_range(c, nc, x0, dx, scale, out, n);
}

} // namespace gabor::kernels

#endif
