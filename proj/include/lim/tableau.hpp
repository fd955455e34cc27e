#pragma once

#include "lim/legendre.hpp"
#include "lim/types.hpp"

#include <Eigen/Eigenvalues>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace lim {

/// All quadrature- and Legendre-derived matrices a LIM(k1,k2,s) step needs.
/// Immutable once built; safe to share across threads.
///
/// Two independent Gauss-Legendre rules are used: a k1-node rule for the
/// projections of the structure matrix S and a k2-node rule for the
/// projections of the Hamiltonian gradient.
struct MethodTableau {
    int s = 0;   // polynomial degree of the step update (method order is 2s)
    int k1 = 0;  // nodes of the S-projection rule, k1 >= s
    int k2 = 0;  // nodes of the gradient-projection rule, k2 >= s

    Quadrature rule_S;  // k1 nodes/weights
    Quadrature rule_H;  // k2 nodes/weights

    Mat basis_S;  // k1 x s,  P_{j}(c) at the S-rule nodes
    Mat integ_S;  // k1 x s,  int_0^c P_{j} at the S-rule nodes
    Mat basis_H;  // k2 x s
    Mat integ_H;  // k2 x s

    // The s x s structure matrix of Legendre integration: xi_0 = 1/2 in the
    // top-left corner, +/-xi_i on the sub/super diagonal with
    // xi_i = 1/(2 sqrt(4i^2-1)). Equals basis^T * diag(w) * integ for either
    // rule, which the tests verify.
    Mat stage_matrix;
    Mat stage_matrix_inv;

    // Smallest eigenvalue modulus of stage_matrix; the relaxation parameter
    // of the blended iteration.
    double rho_s = 0.0;
};

namespace detail {

inline Mat basis_matrix(const Quadrature& q, int s) {
    Mat m(q.order_k, s);
    for (int l = 0; l < q.order_k; ++l)
        for (int j = 0; j < s; ++j) m(l, j) = legendre_eval(j, q.nodes[l]);
    return m;
}

inline Mat integral_matrix(const Quadrature& q, int s) {
    Mat m(q.order_k, s);
    for (int l = 0; l < q.order_k; ++l)
        for (int j = 0; j < s; ++j) m(l, j) = legendre_integral(j, q.nodes[l]);
    return m;
}

}  // namespace detail

inline MethodTableau build_tableau(int s, int k1, int k2) {
    if (s < 1) throw std::invalid_argument("build_tableau: s must be >= 1");
    if (k1 < s)
        throw std::invalid_argument("build_tableau: k1 must be >= s (got k1=" +
                                    std::to_string(k1) + ", s=" + std::to_string(s) + ")");
    if (k2 < s)
        throw std::invalid_argument("build_tableau: k2 must be >= s (got k2=" +
                                    std::to_string(k2) + ", s=" + std::to_string(s) + ")");

    MethodTableau t;
    t.s = s;
    t.k1 = k1;
    t.k2 = k2;
    t.rule_S = gauss_legendre(k1);
    t.rule_H = gauss_legendre(k2);
    t.basis_S = detail::basis_matrix(t.rule_S, s);
    t.integ_S = detail::integral_matrix(t.rule_S, s);
    t.basis_H = detail::basis_matrix(t.rule_H, s);
    t.integ_H = detail::integral_matrix(t.rule_H, s);

    t.stage_matrix = Mat::Zero(s, s);
    t.stage_matrix(0, 0) = 0.5;
    for (int i = 1; i < s; ++i) {
        const double xi = 0.5 / std::sqrt(4.0 * i * i - 1.0);
        t.stage_matrix(i, i - 1) = xi;
        t.stage_matrix(i - 1, i) = -xi;
    }
    t.stage_matrix_inv = t.stage_matrix.inverse();

    const Eigen::EigenSolver<Mat> eig(t.stage_matrix, /*computeEigenvectors=*/false);
    t.rho_s = eig.eigenvalues().cwiseAbs().minCoeff();
    return t;
}

/// Cached immutable tableau per (s,k1,k2); they are reused every step.
inline std::shared_ptr<const MethodTableau> shared_tableau(int s, int k1, int k2) {
    static std::map<std::tuple<int, int, int>, std::shared_ptr<const MethodTableau>> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto& entry = cache[{s, k1, k2}];
    if (!entry) entry = std::make_shared<const MethodTableau>(build_tableau(s, k1, k2));
    return entry;
}

}  // namespace lim
