#include "entroflux/relent.hpp"

#include <cmath>

#include "entroflux/errors.hpp"

namespace entroflux {

namespace {

void check_reference(const System& system, const Vec& U) {
    if (!system.in_interior(U)) {
        throw DomainError(system.name() + ": reference state U must be interior to X");
    }
}

} // namespace

double relative_entropy(const System& system, const Vec& u, const Vec& U) {
    check_reference(system, U);
    return system.eta(u) - system.eta(U) - system.G(U).dot(system.A(u) - system.A(U));
}

Vec relative_flux(const System& system, int alpha, const Vec& u, const Vec& U) {
    check_reference(system, U);
    const Vec dA = system.A(u) - system.A(U);
    const Vec y = lu_solve(system.grad_A(U), dA);
    return system.F(alpha, u) - system.F(alpha, U) - system.grad_F(alpha, U) * y;
}

void check_normalized(const MeasureCell& nu, double tol) {
    if (nu.atoms.size() != nu.weights.size() || nu.atoms.empty()) {
        throw MeasureError("measure cell has mismatched or empty atom/weight lists");
    }
    double total = 0.0;
    for (double w : nu.weights) {
        if (w < -tol) {
            throw MeasureError("negative atom weight");
        }
        total += w;
    }
    if (std::abs(total - 1.0) > tol) {
        throw MeasureError("atom weights do not sum to 1");
    }
}

double averaged_H(const System& system, const MeasureCell& nu, const Vec& U) {
    check_normalized(nu);
    check_reference(system, U);
    double eta_avg = 0.0;
    Vec a_avg = Vec::Zero(system.state_dim());
    for (std::size_t i = 0; i < nu.atoms.size(); ++i) {
        eta_avg += nu.weights[i] * system.eta(nu.atoms[i]);
        a_avg += nu.weights[i] * system.A(nu.atoms[i]);
    }
    return eta_avg - system.eta(U) - system.G(U).dot(a_avg - system.A(U));
}

AveragedZ averaged_Z(const System& system, int alpha, const MeasureCell& nu, const Vec& U) {
    check_normalized(nu);
    check_reference(system, U);
    Vec f_avg = Vec::Zero(system.state_dim());
    Vec a_avg = Vec::Zero(system.state_dim());
    for (std::size_t i = 0; i < nu.atoms.size(); ++i) {
        f_avg += nu.weights[i] * system.F(alpha, nu.atoms[i]);
        a_avg += nu.weights[i] * system.A(nu.atoms[i]);
    }
    const Vec y = lu_solve(system.grad_A(U), a_avg - system.A(U));
    AveragedZ out;
    out.value = f_avg - system.F(alpha, U) - system.grad_F(alpha, U) * y;
    const double h = averaged_H(system, nu, U);
    const double z = out.value.lpNorm<Eigen::Infinity>();
    if (h > 0.0) {
        out.ratio_to_H = z / h;
    } else {
        out.ratio_to_H = (z == 0.0) ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return out;
}

} // namespace entroflux
