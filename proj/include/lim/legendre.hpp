#pragma once

#include "lim/types.hpp"

#include <cmath>
#include <stdexcept>

namespace lim {

// Orthonormal Legendre basis on [0,1]:  int_0^1 P_i(x) P_j(x) dx = delta_ij.
// Everything below works through the standard basis L_j on [-1,1] via
// P_j(x) = sqrt(2j+1) * L_j(2x-1); the sqrt(2j+1) factor never leaks out.

namespace detail {

// L_{degree}(t) on [-1,1] by the three-term recurrence.
inline double legendre_std(int degree, double t) {
    if (degree == 0) return 1.0;
    double prev = 1.0, cur = t;
    for (int j = 1; j < degree; ++j) {
        const double next = ((2 * j + 1) * t * cur - j * prev) / (j + 1);
        prev = cur;
        cur = next;
    }
    return cur;
}

// L_k(t) and L_k'(t) together, for Newton refinement of the roots.
inline std::pair<double, double> legendre_std_with_deriv(int k, double t) {
    double prev = 1.0, cur = t;
    if (k == 0) return {1.0, 0.0};
    for (int j = 1; j < k; ++j) {
        const double next = ((2 * j + 1) * t * cur - j * prev) / (j + 1);
        prev = cur;
        cur = next;
    }
    const double deriv = k * (t * cur - prev) / (t * t - 1.0);
    return {cur, deriv};
}

}  // namespace detail

/// Value of the orthonormal shifted Legendre polynomial of given degree at x in [0,1].
inline double legendre_eval(int degree, double x) {
    return std::sqrt(2.0 * degree + 1.0) * detail::legendre_std(degree, 2.0 * x - 1.0);
}

/// int_0^x P_degree, in closed form. For degree >= 1 the primitive is
/// (L_{j+1} - L_{j-1}) / (2 sqrt(2j+1)) evaluated at t = 2x-1, which vanishes
/// at both x=0 and x=1; degree 0 integrates to x.
inline double legendre_integral(int degree, double x) {
    if (degree == 0) return x;
    const double t = 2.0 * x - 1.0;
    const double hi = detail::legendre_std(degree + 1, t);
    const double lo = detail::legendre_std(degree - 1, t);
    return (hi - lo) / (2.0 * std::sqrt(2.0 * degree + 1.0));
}

/// Gauss-Legendre rule on [0,1]. Nodes are strictly increasing, symmetric
/// about 1/2, with matching symmetric weights summing to 1.
struct Quadrature {
    Vec nodes;
    Vec weights;
    int order_k = 0;  // number of nodes; the rule is exact up to degree 2k-1
};

/// k-node Gauss-Legendre rule on [0,1]. Roots of L_k are found by Newton
/// iteration from Chebyshev initial guesses and mirrored, so the symmetry
/// relations hold exactly in floating point. Throws if a root fails to
/// converge (an implementation bug, not a usage error).
inline Quadrature gauss_legendre(int k) {
    if (k < 1) throw std::invalid_argument("gauss_legendre: k must be >= 1");

    Quadrature q;
    q.order_k = k;
    q.nodes.resize(k);
    q.weights.resize(k);

    const int half = k / 2;
    // Positive roots of L_k on (0,1], largest first.
    for (int i = 1; i <= half; ++i) {
        double t = std::cos(M_PI * (i - 0.25) / (k + 0.5));
        double value = 0.0, deriv = 1.0;
        bool converged = false;
        for (int it = 0; it < 100; ++it) {
            std::tie(value, deriv) = detail::legendre_std_with_deriv(k, t);
            const double dt = value / deriv;
            t -= dt;
            if (std::abs(dt) < 1e-15) {
                converged = true;
                break;
            }
        }
        std::tie(value, deriv) = detail::legendre_std_with_deriv(k, t);
        if (!converged || std::abs(value) > 1e-13 * std::abs(deriv)) {
            throw std::runtime_error("gauss_legendre: Newton iteration failed for k=" +
                                     std::to_string(k));
        }
        const double w = 1.0 / ((1.0 - t * t) * deriv * deriv);
        // t > 0 maps to the upper node (1+t)/2; mirror for the lower one.
        q.nodes[k - i] = (1.0 + t) / 2.0;
        q.nodes[i - 1] = (1.0 - t) / 2.0;
        q.weights[k - i] = w;
        q.weights[i - 1] = w;
    }
    if (k % 2 == 1) {
        // Middle node is exactly 1/2 (L_k is odd about 0 for odd k).
        const auto [value, deriv] = detail::legendre_std_with_deriv(k, 0.0);
        (void)value;
        q.nodes[half] = 0.5;
        q.weights[half] = 1.0 / (deriv * deriv);
    }
    return q;
}

}  // namespace lim
