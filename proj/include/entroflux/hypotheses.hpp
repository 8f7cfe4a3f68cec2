#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "entroflux/systems.hpp"

namespace entroflux {

/// Structured sampling plan realizing the "for all u in X" quantifiers on a
/// compact box plus far-field rays.
struct SampleDesign {
    DomainBox box;
    int n_samples = 1000;
    int n_rays = 64;
    std::vector<double> s_grid; // empty = geometric 10 .. 1e6, 11 points
    std::uint64_t seed = 1;

    static std::vector<double> default_s_grid();
};

struct HypothesisReport {
    std::string id;
    bool pass = false;
    double tolerance = 0.0;
    std::map<std::string, double> residuals; // named residual maxima
    std::map<std::string, double> constants; // estimated C values, drifts
    std::map<std::string, double> stats;     // min det, min eigenvalue, counters
    std::vector<std::string> notes;          // truncations, skipped pairs, ...
    std::uint64_t seed = 0;
    long samples = 0;

    // H4 extras: max-over-rays ratio curves along the s grid
    std::vector<double> s_grid;
    std::vector<double> ratio_A;
    std::vector<double> ratio_F;
    bool holds_14 = false;
};

/// (H1): min |det grad A| over box samples; pass iff > 1e-10.
HypothesisReport check_H1(const System& system, const SampleDesign& design);

/// (H2)/(H2'): residuals of grad eta = G.grad A and grad q_a (+ Lbar_a) =
/// G.grad F_a plus the symmetry of grad G^T grad A (and grad G^T grad F_a for
/// unconstrained systems); pass iff all <= 1e-8.
HypothesisReport check_H2(const System& system, const SampleDesign& design);

/// (H3): min eigenvalue of hess eta - G.hess A over box samples; pass iff > 1e-10.
HypothesisReport check_H3(const System& system, const SampleDesign& design);

/// (H4): |A|/eta and |F_a|/eta along anisotropically scaled rays; reports the
/// empirical sup (the C of the bounds) and classifies whether |A|/eta -> 0.
HypothesisReport check_H4(const System& system, const SampleDesign& design);

/// (H5): empirical C = max |F_a(u|U)|/eta(u|U) over sampled pairs, with
/// near-coincident pairs (eta(u|U) < 1e-12) skipped and counted; pass iff the
/// estimate is finite and moves <= 5% under sample doubling.
HypothesisReport check_H5(const System& system, const SampleDesign& design_u,
                          const SampleDesign& design_U);

/// (H2') field identity: projects the designated fields of n random smooth
/// states on an NxN torus and integrates Lbar_a(u) . d_a u by centered
/// differences; pass iff every |integral| <= tol_coeff * h.
/// `project_subset` restricts which designated fields get projected (used as
/// a negative control); all by default.
HypothesisReport check_H2prime(const System& system, int n_fields, int N, std::uint64_t seed,
                               const std::vector<int>* project_subset = nullptr,
                               double tol_coeff = 1.0);

/// The discrete integral of Lbar_alpha(u) . d_alpha u (centered differences)
/// over one sampled field.
double h2prime_integral(const System& system, const StateField2D& field);

/// Analytic first/second derivatives against central finite differences over
/// interior samples; pass iff every scaled deviation is <= 1e-5.
HypothesisReport check_derivatives(const System& system, const SampleDesign& design);

/// All applicable checks for one system with a shared box design. Zero H5
/// sample counts derive them from the design.
std::vector<HypothesisReport> check_all(const System& system, const SampleDesign& design,
                                        int h2prime_fields = 4, int h2prime_N = 48,
                                        int h5_u_samples = 0, int h5_U_samples = 0);

} // namespace entroflux
