#pragma once

#include <vector>

namespace entroflux {

/// Scalar field on the NxN periodic unit torus, row-major (index = iy*N + ix).
using ScalarField2D = std::vector<double>;

/// Removes the gradient part of (fx, fy) in Fourier space so the field is
/// divergence-free with respect to the exact spectral derivative. The mean
/// mode is left untouched. Idempotent up to FFT roundoff.
void project_divergence_free(int N, ScalarField2D& fx, ScalarField2D& fy);

/// Spectral divergence of (fx, fy); max-norm of this is the Y-membership test.
ScalarField2D spectral_divergence(int N, const ScalarField2D& fx, const ScalarField2D& fy);

} // namespace entroflux
