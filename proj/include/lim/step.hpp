#pragma once

#include "lim/legendre.hpp"
#include "lim/poisson.hpp"
#include "lim/tableau.hpp"
#include "lim/types.hpp"

#include <string>
#include <utility>

namespace lim {

/// The stacked unknown of one step: an n x s matrix whose column i is the
/// i-th stage coefficient of the degree-s update polynomial
///   u(ch) = y0 + h * sum_i int_0^c P_i  * stages.col(i).
using StageCoefficients = Mat;

/// States of the update polynomial at the two quadrature rules' nodes:
/// first the k1 columns at the S-rule nodes, then the k2 columns at the
/// gradient-rule nodes.
inline std::pair<Mat, Mat> stage_states(const MethodTableau& tab, const Vec& y0, double h,
                                        const StageCoefficients& stages) {
    Mat at_s = (h * stages * tab.integ_S.transpose()).colwise() + y0;
    Mat at_h = (h * stages * tab.integ_H.transpose()).colwise() + y0;
    return {std::move(at_s), std::move(at_h)};
}

/// One application of the step map: project grad H on the Legendre basis with
/// the k2-node rule, re-expand at the k1 S-nodes, apply S there, and project
/// back. A fixed point of this map solves the step. The two projections are
/// contracted node-by-node, so nothing of size (s n) x (s n) is ever formed.
inline StageCoefficients fixed_point_map(const MethodTableau& tab, const PoissonSystem& sys,
                                         const Vec& y0, double h,
                                         const StageCoefficients& stages) {
    const int n = sys.dim;

    Mat at_h = (h * stages * tab.integ_H.transpose()).colwise() + y0;
    Mat grads(n, tab.k2);
    for (int l = 0; l < tab.k2; ++l) {
        try {
            grads.col(l) = sys.gradient(at_h.col(l));
        } catch (const DomainError& e) {
            throw DomainError("gradient node " + std::to_string(l + 1) + "/" +
                                  std::to_string(tab.k2) + ": " + e.what(),
                              e.state());
        }
    }
    // gamma_j = sum_l w_l P_j(c_l) gradH(u(c_l h)), then re-expanded at the
    // S-rule nodes: v_l = sum_j P_j(chat_l) gamma_j.
    Mat gamma = grads * tab.rule_H.weights.asDiagonal() * tab.basis_H;  // n x s
    Mat v = gamma * tab.basis_S.transpose();                            // n x k1

    Mat at_s = (h * stages * tab.integ_S.transpose()).colwise() + y0;
    Mat sv(n, tab.k1);
    for (int l = 0; l < tab.k1; ++l) {
        try {
            sv.col(l) = sys.structure(at_s.col(l)) * v.col(l);
        } catch (const DomainError& e) {
            throw DomainError("structure node " + std::to_string(l + 1) + "/" +
                                  std::to_string(tab.k1) + ": " + e.what(),
                              e.state());
        }
    }
    return sv * tab.rule_S.weights.asDiagonal() * tab.basis_S;  // n x s
}

/// Residual of the step equations: stages minus the step map applied to them.
inline StageCoefficients residual(const MethodTableau& tab, const PoissonSystem& sys,
                                  const Vec& y0, double h, const StageCoefficients& stages) {
    return stages - fixed_point_map(tab, sys, y0, h, stages);
}

/// Value of the update polynomial at intermediate time c*h, c in [0,1].
/// At c=1 this reduces to y0 + h*stages.col(0), the step endpoint.
inline Vec dense_output(const MethodTableau& tab, const Vec& y0, double h,
                        const StageCoefficients& stages, double c) {
    Vec primitives(tab.s);
    for (int i = 0; i < tab.s; ++i) primitives[i] = legendre_integral(i, c);
    return y0 + h * stages * primitives;
}

struct StepResult {
    Vec y1;
    StageCoefficients stages;
    int iterations = 0;
    double residual_norm = 0.0;  // final solver increment norm
    double energy_drift = 0.0;   // H(y1) - H(y0)
};

/// Advance the step with already-solved stage coefficients.
inline StepResult advance(const MethodTableau& tab, const PoissonSystem& sys, const Vec& y0,
                          double h, const StageCoefficients& stages) {
    (void)tab;
    StepResult r;
    r.y1 = y0 + h * stages.col(0);
    r.stages = stages;
    r.energy_drift = sys.hamiltonian(r.y1) - sys.hamiltonian(y0);
    return r;
}

}  // namespace lim
