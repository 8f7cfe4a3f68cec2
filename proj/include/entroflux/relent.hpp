#pragma once

#include <vector>

#include "entroflux/systems.hpp"

namespace entroflux {

/// One cell of a discrete Young measure: atoms in the state closure with
/// weights summing to one.
struct MeasureCell {
    std::vector<Vec> atoms;
    std::vector<double> weights;
};

/// eta(u|U) = eta(u) - eta(U) - G(U) . (A(u) - A(U)).
/// Asymmetric by design: u may sit on the boundary, U must be interior.
double relative_entropy(const System& system, const Vec& u, const Vec& U);

/// F_alpha(u|U) = F_alpha(u) - F_alpha(U) - grad F_alpha(U) grad A(U)^{-1} (A(u) - A(U)).
/// The inverse is applied through an LU solve, never formed.
Vec relative_flux(const System& system, int alpha, const Vec& u, const Vec& U);

/// H(nu, U) = <nu, eta> - eta(U) - G(U) . (<nu, A> - A(U)).
double averaged_H(const System& system, const MeasureCell& nu, const Vec& U);

struct AveragedZ {
    Vec value;
    double ratio_to_H; // |Z|_inf / H, for the C1 audit (inf when H = 0, 0 when both 0)
};

/// Z_alpha(nu, U) = <nu, F_alpha> - F_alpha(U) - grad F_alpha(U) grad A(U)^{-1} (<nu, A> - A(U)).
AveragedZ averaged_Z(const System& system, int alpha, const MeasureCell& nu, const Vec& U);

/// Throws MeasureError unless weights are a probability vector within tol.
void check_normalized(const MeasureCell& nu, double tol = 1e-12);

} // namespace entroflux
