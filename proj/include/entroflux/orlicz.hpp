#pragma once

#include <functional>
#include <string>
#include <vector>

#include "entroflux/rng.hpp"

namespace entroflux {

/// An N-function: convex, M(0) = 0, M(v)/v -> 0 at 0 and -> inf at inf.
struct NFunction {
    std::string name;
    std::function<double(double)> M;
    std::function<double(double)> closed_form_conjugate; // optional, may be empty

    /// M1(v) = v^2 sqrt(log(v + 1)).
    static NFunction M1();
    /// M2(v) = v^2 (exact conjugate xi^2/4).
    static NFunction M2();
};

/// M*(xi) = sup_{rho in [0, cap]} (xi rho - M(rho)), computed by golden
/// section on the concave inner objective; uses the closed form when the
/// N-function carries one. Throws CapError when the maximizer presses
/// against the cap.
double fenchel_conjugate(const NFunction& m, double xi, double search_cap = 1e9,
                         int iterations = 200);

/// Max over sampled nonnegative pairs of v w - M(v) - M*(w) (positive values
/// violate the Fenchel-Young inequality).
double fenchel_young_max_violation(const NFunction& m, int n_pairs, double v_max,
                                   double w_max, std::uint64_t seed,
                                   double conjugate_cap = 1e9);

struct StrongerRatioRow {
    double lambda;
    double first_ratio;
    double last_ratio;
    bool decreasing;
};

struct StrongerReport {
    bool pass = false;            // combined verdict
    bool primal_pass = false;     // terminal <= threshold * initial for every lambda
    bool dual_decreasing = false; // M1*(xi)/M2*(xi) decreasing along xi_grid
    double threshold = 0.0;
    std::vector<StrongerRatioRow> table;
    std::vector<double> dual_ratios;
};

/// Probes "M1 essentially stronger than M2" through the ratio trend
/// M2(lambda v)/M1(v) along v_grid, plus the dual trend M1*(xi)/M2*(xi).
/// Defaults: lambda_grid {0.5, 1, 2, 5}, v_grid geometric 1.1 .. 1e145 (the
/// span a double needs before sqrt(log) has decayed by the 0.05 factor),
/// xi_grid geometric 1e2 .. 1e6.
StrongerReport essentially_stronger_check(const NFunction& m1, const NFunction& m2,
                                          std::vector<double> lambda_grid = {},
                                          std::vector<double> v_grid = {},
                                          double threshold = 0.05,
                                          std::vector<double> xi_grid = {});

} // namespace entroflux
