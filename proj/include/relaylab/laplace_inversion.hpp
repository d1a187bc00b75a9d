#pragma once

#include <complex>
#include <functional>

namespace relaylab {

// Numerical inversion of a Laplace transform F at time t > 0, for F analytic
// off the negative real axis (our transforms are exp(-c*s^delta), delta < 1).

// Fixed-contour Talbot rule with m nodes; converges geometrically in m for
// smooth transforms.
double talbot_invert(
    const std::function<std::complex<double>(std::complex<double>)>& transform,
    double t, int m = 32);

// Same contour, but the transform is supplied as its complex logarithm so
// each node factor exp(t*s + log F(s)) is formed in a single exponential.
// Throws when a node exponent overflows double range, which means the
// transform grows faster than exp(t*s) decays out on the contour and the
// rule's answer would be garbage.
double talbot_invert_logf(
    const std::function<std::complex<double>(std::complex<double>)>& log_transform,
    double t, int m = 32);

// Gaver-Stehfest with n terms (n even, <= 20). Uses only real-axis transform
// values; coefficients are accumulated in extended precision because they
// alternate with large magnitude.
double gaver_stehfest_invert(const std::function<double(double)>& transform,
                             double t, int n = 16);

}  // namespace relaylab
