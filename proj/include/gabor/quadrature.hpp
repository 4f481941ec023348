#ifndef GABOR_QUADRATURE_HPP
#define GABOR_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace gabor {

struct GaussRule {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights;
};

/// Gauss-Legendre rule with n points; exact for polynomials of degree 2n-1.
GaussRule gauss_legendre(int n);

/// Apply a rule to [a, b].
double gauss_integrate(const GaussRule& rule, double a, double b,
                       const std::function<double(double)>& f);

} // namespace gabor

#endif
