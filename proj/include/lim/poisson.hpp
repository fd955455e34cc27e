#pragma once

#include "lim/types.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace lim {

/// The problem dy/dt = S(y) grad H(y) as a bundle of evaluable fields.
/// S must be skew-symmetric wherever it is evaluated; H is then conserved
/// along exact solutions. Instances are immutable after construction and the
/// callables must be re-entrant.
struct PoissonSystem {
    int dim = 0;
    std::function<Mat(const Vec&)> structure;        // y -> S(y), dim x dim
    std::function<Vec(const Vec&)> gradient;         // y -> grad H(y)
    std::function<double(const Vec&)> hamiltonian;   // y -> H(y)
    std::function<Mat(const Vec&)> jacobian;         // optional: y -> f'(y)
};

/// f(y) = S(y) grad H(y).
inline Vec eval_f(const PoissonSystem& sys, const Vec& y) {
    return sys.structure(y) * sys.gradient(y);
}

/// Elementwise eval_f over a batch of states. Kept sequential so results are
/// bitwise identical to one-at-a-time evaluation.
inline std::vector<Vec> eval_f_batch(const PoissonSystem& sys, const std::vector<Vec>& ys) {
    std::vector<Vec> out;
    out.reserve(ys.size());
    for (const auto& y : ys) out.push_back(eval_f(sys, y));
    return out;
}

/// Jacobian of f at y: the analytic one if the system supplies it, otherwise
/// central finite differences with step sqrt(eps)*(1+|y_i|) per component.
/// Only used to precondition the Newton-type iterations, so O(step^2)
/// accuracy is enough.
inline Mat jacobian_f(const PoissonSystem& sys, const Vec& y) {
    if (sys.jacobian) return sys.jacobian(y);
    const int n = sys.dim;
    const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());
    Mat jac(n, n);
    Vec yp = y, ym = y;
    for (int i = 0; i < n; ++i) {
        const double step = sqrt_eps * (1.0 + std::abs(y[i]));
        yp[i] = y[i] + step;
        ym[i] = y[i] - step;
        jac.col(i) = (eval_f(sys, yp) - eval_f(sys, ym)) / (2.0 * step);
        yp[i] = y[i];
        ym[i] = y[i];
    }
    return jac;
}

}  // namespace lim
