#pragma once

#include "lim/poisson.hpp"
#include "lim/types.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>

namespace lim {

/// Magnetic field definition with the analytic first derivatives the
/// gyrocenter dynamics needs. All maps take the position x in R^3.
struct FieldModel {
    std::function<Vec3(const Vec3&)> vector_potential;  // A, with B = curl A
    std::function<Vec3(const Vec3&)> field;             // B, in closed form
    std::function<double(const Vec3&)> field_norm;      // |B|
    std::function<Vec3(const Vec3&)> unit_field;        // b = B/|B|
    std::function<Vec3(const Vec3&)> unit_field_curl;   // curl b
    std::function<Vec3(const Vec3&)> field_norm_grad;   // grad |B|
};

struct ElectricPotential {
    std::function<double(const Vec3&)> value;     // phi, with E = -grad phi
    std::function<Vec3(const Vec3&)> gradient;    // grad phi
};

inline ElectricPotential zero_potential() {
    return {[](const Vec3&) { return 0.0; }, [](const Vec3&) { return Vec3::Zero().eval(); }};
}

/// phi(x) = x^T G x / 2 with diagonal G; grad phi = G x.
inline ElectricPotential quadratic_potential(const Vec3& g_diag) {
    return {[g_diag](const Vec3& x) { return 0.5 * x.dot(g_diag.cwiseProduct(x)); },
            [g_diag](const Vec3& x) { return g_diag.cwiseProduct(x).eval(); }};
}

/// One gyrocenter problem: field + electric potential + adiabatic invariant mu.
/// The state is y = (x, u) in R^4 with u the velocity along the field line.
struct GyrocenterModel {
    FieldModel field;
    ElectricPotential potential;
    double mu = 0.0;
};

/// H(y) = u^2/2 + mu |B(x)| + phi(x).
inline double hamiltonian(const GyrocenterModel& m, const Vec& y) {
    const Vec3 x = y.head<3>();
    return 0.5 * y[3] * y[3] + m.mu * m.field.field_norm(x) + m.potential.value(x);
}

/// grad H(y) = (mu grad|B| + grad phi, u).
inline Vec grad_hamiltonian(const GyrocenterModel& m, const Vec& y) {
    const Vec3 x = y.head<3>();
    Vec g(4);
    g.head<3>() = m.mu * m.field.field_norm_grad(x) + m.potential.gradient(x);
    g[3] = y[3];
    return g;
}

/// The skew-symmetric structure matrix of the gyrocenter dynamics,
///
///        1     (  0  -b3   b2  a1 )
///   ---------- (  b3   0  -b1  a2 )        a(y) = B(x) + u curl b(x),
///   |b(x)^T a| ( -b2  b1    0  a3 )
///              ( -a1 -a2  -a3   0 )
///
/// Skew symmetry is structural; the scaling degenerates only where b^T a
/// vanishes (degenerate gyrocenter geometry), which is reported as a domain
/// error carrying the state.
inline Mat poisson_matrix(const GyrocenterModel& m, const Vec& y) {
    const Vec3 x = y.head<3>();
    const Vec3 b = m.field.unit_field(x);
    const Vec3 a = m.field.field(x) + y[3] * m.field.unit_field_curl(x);
    const double denom = std::abs(b.dot(a));
    if (!(denom >= 1e-300))
        throw DomainError("gyrocenter structure matrix is singular (b.a ~ 0)", y);

    Mat s = Mat::Zero(4, 4);
    s(0, 1) = -b[2];
    s(0, 2) = b[1];
    s(1, 2) = -b[0];
    for (int i = 0; i < 3; ++i) s(i, 3) = a[i];
    s -= Mat(s.transpose());
    return s / denom;
}

namespace detail {

// Dipole field of moment M: A = (M/rho^3) (x2, -x1, 0), rho = |x|.
// grad|B| and curl b are differentiated by hand from the closed forms
//   |B| = |M| w / rho^4,               w = sqrt(rho^2 + 3 x3^2),
//   b   = -sign(M) v / (rho w),        v = (3 x1 x3, 3 x2 x3, 2 x3^2 - x1^2 - x2^2),
// using curl(v/g) = curl(v)/g + (v x grad g)/g^2 with g = rho w.
struct DipoleField {
    double moment;

    void guard(const Vec3& x) const {
        if (!(x.norm() > 1e-75))
            throw DomainError("dipole field evaluated at the origin", Vec(x));
    }

    Vec3 tilt(const Vec3& x) const {  // the shared numerator v
        return {3.0 * x[0] * x[2], 3.0 * x[1] * x[2],
                2.0 * x[2] * x[2] - x[0] * x[0] - x[1] * x[1]};
    }

    Vec3 vector_potential(const Vec3& x) const {
        guard(x);
        const double rho3 = std::pow(x.norm(), 3);
        return Vec3(x[1], -x[0], 0.0) * (moment / rho3);
    }

    Vec3 field(const Vec3& x) const {
        guard(x);
        const double rho5 = std::pow(x.norm(), 5);
        return tilt(x) * (-moment / rho5);
    }

    double field_norm(const Vec3& x) const {
        guard(x);
        const double rho2 = x.squaredNorm();
        const double w = std::sqrt(rho2 + 3.0 * x[2] * x[2]);
        return std::abs(moment) * w / (rho2 * rho2);
    }

    Vec3 unit_field(const Vec3& x) const {
        guard(x);
        const double rho = x.norm();
        const double w = std::sqrt(rho * rho + 3.0 * x[2] * x[2]);
        const double sign = moment > 0 ? -1.0 : 1.0;
        return tilt(x) * (sign / (rho * w));
    }

    Vec3 field_norm_grad(const Vec3& x) const {
        guard(x);
        const double rho2 = x.squaredNorm();
        const double rho4 = rho2 * rho2;
        const double w = std::sqrt(rho2 + 3.0 * x[2] * x[2]);
        Vec3 grad_w(x[0], x[1], 4.0 * x[2]);  // (x_i + 3 x3 delta_i3) / w
        grad_w /= w;
        return std::abs(moment) * (grad_w / rho4 - 4.0 * w / (rho4 * rho2) * x);
    }

    Vec3 unit_field_curl(const Vec3& x) const {
        guard(x);
        const double rho = x.norm();
        const double w = std::sqrt(rho * rho + 3.0 * x[2] * x[2]);
        const double g = rho * w;
        const Vec3 v = tilt(x);
        const Vec3 curl_v(-5.0 * x[1], 5.0 * x[0], 0.0);
        Vec3 grad_g = (w / rho) * x + (rho / w) * Vec3(x[0], x[1], 4.0 * x[2]);
        const double sign = moment > 0 ? -1.0 : 1.0;
        return sign * (curl_v / g + v.cross(grad_g) / (g * g));
    }
};

// Tokamak field with circular concentric flux surfaces:
//   R = sqrt(x1^2+x2^2), r^2 = (R-R0)^2 + x3^2, m = sqrt(r^2 + q^2 R0^2),
//   B = B0/(q R^2) v,  v = (-x1 x3 - q R0 x2, -x2 x3 + q R0 x1, R(R-R0)),
//   |B| = |B0/q| m / R,  b = sign(B0/q) v / (R m).
struct TokamakField {
    double b0, r0, q;

    void guard(const Vec3& x) const {
        if (!(std::hypot(x[0], x[1]) > 1e-75))
            throw DomainError("tokamak field evaluated on the symmetry axis R=0", Vec(x));
    }

    double big_r(const Vec3& x) const { return std::hypot(x[0], x[1]); }

    double m_of(const Vec3& x) const {
        const double rr = big_r(x) - r0;
        return std::sqrt(rr * rr + x[2] * x[2] + q * q * r0 * r0);
    }

    Vec3 windings(const Vec3& x) const {  // the shared numerator v
        const double r = big_r(x);
        return {-x[0] * x[2] - q * r0 * x[1], -x[1] * x[2] + q * r0 * x[0], r * (r - r0)};
    }

    Vec3 vector_potential(const Vec3& x) const {
        guard(x);
        const double r = big_r(x);
        const double rr = r - r0;
        const double r2 = rr * rr + x[2] * x[2];
        return Vec3(q * r0 * x[0] * x[2] - x[1] * r2, q * r0 * x[1] * x[2] + x[0] * r2,
                    -q * r * r * r0 * std::log(r / r0)) *
               (b0 / (2.0 * q * r * r));
    }

    Vec3 field(const Vec3& x) const {
        guard(x);
        const double r = big_r(x);
        return windings(x) * (b0 / (q * r * r));
    }

    double field_norm(const Vec3& x) const {
        guard(x);
        return std::abs(b0 / q) * m_of(x) / big_r(x);
    }

    Vec3 unit_field(const Vec3& x) const {
        guard(x);
        const double sign = b0 / q > 0 ? 1.0 : -1.0;
        return windings(x) * (sign / (big_r(x) * m_of(x)));
    }

    Vec3 field_norm_grad(const Vec3& x) const {
        guard(x);
        const double r = big_r(x);
        const double m = m_of(x);
        const Vec3 grad_r(x[0] / r, x[1] / r, 0.0);
        const Vec3 grad_m = ((r - r0) * grad_r + Vec3(0, 0, x[2])) / m;
        return std::abs(b0 / q) * (grad_m / r - (m / (r * r)) * grad_r);
    }

    Vec3 unit_field_curl(const Vec3& x) const {
        guard(x);
        const double r = big_r(x);
        const double m = m_of(x);
        const double g = r * m;
        const Vec3 v = windings(x);
        const double c = 3.0 - r0 / r;
        const Vec3 curl_v(c * x[1], -c * x[0], 2.0 * q * r0);
        const Vec3 grad_r(x[0] / r, x[1] / r, 0.0);
        const Vec3 grad_g = m * grad_r + (r / m) * ((r - r0) * grad_r + Vec3(0, 0, x[2]));
        const double sign = b0 / q > 0 ? 1.0 : -1.0;
        return sign * (curl_v / g + v.cross(grad_g) / (g * g));
    }
};

template <class Impl>
FieldModel wrap_field(Impl impl) {
    FieldModel f;
    f.vector_potential = [impl](const Vec3& x) { return impl.vector_potential(x); };
    f.field = [impl](const Vec3& x) { return impl.field(x); };
    f.field_norm = [impl](const Vec3& x) { return impl.field_norm(x); };
    f.unit_field = [impl](const Vec3& x) { return impl.unit_field(x); };
    f.unit_field_curl = [impl](const Vec3& x) { return impl.unit_field_curl(x); };
    f.field_norm_grad = [impl](const Vec3& x) { return impl.field_norm_grad(x); };
    return f;
}

}  // namespace detail

/// Dipole magnetic field of moment M (positive or negative), temporal gauge.
inline GyrocenterModel dipole_model(double M, double mu) {
    if (M == 0.0) throw std::invalid_argument("dipole_model: M must be nonzero");
    return {detail::wrap_field(detail::DipoleField{M}), zero_potential(), mu};
}

/// Tokamak magnetic field with field strength B0 on the magnetic axis, main
/// radius R0 and safety factor q, temporal gauge.
inline GyrocenterModel tokamak_model(double B0, double R0, double q, double mu) {
    if (B0 == 0.0) throw std::invalid_argument("tokamak_model: B0 must be nonzero");
    if (!(R0 > 0.0)) throw std::invalid_argument("tokamak_model: R0 must be positive");
    if (q == 0.0) throw std::invalid_argument("tokamak_model: q must be nonzero");
    return {detail::wrap_field(detail::TokamakField{B0, R0, q}), zero_potential(), mu};
}

/// (R, x3) with R = sqrt(x1^2+x2^2); the plane used for 2-D orbit plots.
inline std::pair<double, double> cylindrical_coords(const Vec3& x) {
    return {std::hypot(x[0], x[1]), x[2]};
}

/// Bundle a gyrocenter model into the generic Poisson form. The Jacobian of
/// f is left to finite differences.
inline PoissonSystem make_system(GyrocenterModel model) {
    PoissonSystem sys;
    sys.dim = 4;
    sys.structure = [model](const Vec& y) { return poisson_matrix(model, y); };
    sys.gradient = [model](const Vec& y) { return grad_hamiltonian(model, y); };
    sys.hamiltonian = [model](const Vec& y) { return hamiltonian(model, y); };
    return sys;
}

}  // namespace lim
