#pragma once

// Adaptive Gauss–Legendre quadrature (15-point panels, bisection on
// disagreement). Shared by the Gaussian-expectation integrals and the
// Euler-product tail estimates.

#include <cmath>
#include <functional>

namespace ergonum::detail {

// 15-point Gauss–Legendre nodes/weights on [-1, 1].
inline constexpr double kGL15Nodes[15] = {
    -0.9879925180204854, -0.9372733924007060, -0.8482065834104272,
    -0.7244177313601701, -0.5709721726085388, -0.3941513470775634,
    -0.2011940939974345, 0.0,                 0.2011940939974345,
    0.3941513470775634,  0.5709721726085388,  0.7244177313601701,
    0.8482065834104272,  0.9372733924007060,  0.9879925180204854};

inline constexpr double kGL15Weights[15] = {
    0.0307532419961173, 0.0703660474881081, 0.1071592204671719,
    0.1395706779261543, 0.1662692058169939, 0.1861610000155622,
    0.1984314853271116, 0.2025782419255613, 0.1984314853271116,
    0.1861610000155622, 0.1662692058169939, 0.1395706779261543,
    0.1071592204671719, 0.0703660474881081, 0.0307532419961173};

inline double gl15_panel(const std::function<double(double)>& f, double a,
                         double b) {
    double mid = 0.5 * (a + b);
    double half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 15; ++i) {
        acc += kGL15Weights[i] * f(mid + half * kGL15Nodes[i]);
    }
    return acc * half;
}

inline double adaptive_gl15_impl(const std::function<double(double)>& f, double a,
                                 double b, double whole, double tol, int depth) {
    double mid = 0.5 * (a + b);
    double left = gl15_panel(f, a, mid);
    double right = gl15_panel(f, mid, b);
    double err = std::abs(left + right - whole);
    if (err <= tol || depth >= 40) return left + right;
    return adaptive_gl15_impl(f, a, mid, left, 0.5 * tol, depth + 1) +
           adaptive_gl15_impl(f, mid, b, right, 0.5 * tol, depth + 1);
}

// Absolute-error target `tol`; the GL15 pair overshoots it comfortably on
// smooth integrands.
inline double adaptive_gl15(const std::function<double(double)>& f, double a,
                            double b, double tol = 1e-12) {
    if (a == b) return 0.0;
    return adaptive_gl15_impl(f, a, b, gl15_panel(f, a, b), tol, 0);
}

}  // namespace ergonum::detail
