#pragma once

#include <string>
#include <vector>

#include "entroflux/relent.hpp"
#include "entroflux/solver.hpp"

namespace entroflux {

/// Empirical Young measure: one atom list per coarse cell.
struct DiscreteYoungMeasure {
    int coarseN = 0;
    int d = 1;
    std::vector<MeasureCell> cells;
    std::string provenance;

    std::size_t cell_count() const { return cells.size(); }
};

/// Bins the fine-cell states inside each coarse cell; atoms within merge_tol
/// (max-norm) merge. Requires the coarse grid to divide the fine one.
DiscreteYoungMeasure empirical_young_measure(const System& system, const ConservedField& fine,
                                             int coarseN, double merge_tol = 1e-9);

/// <nu, f> for f evaluated atom-wise.
double ym_average(const MeasureCell& cell, const std::function<double(const Vec&)>& f);
Vec ym_average_vec(const MeasureCell& cell, const std::function<Vec(const Vec&)>& f);

/// Weighted second moment about the atom mean (trace of the state covariance).
double ym_variance(const MeasureCell& cell);

// ---------------------------------------------------------------------------
// Concentration measures
// ---------------------------------------------------------------------------

/// One member of a generating family: a (possibly vector-valued) quantity
/// sampled on fine space-time cells of the domain [0,T] x torus.
struct SampledLevel {
    int nt = 1;
    int nx = 1;
    int ny = 1; // 1 for 1D space
    double cell_measure = 1.0;          // h^d per fine space cell
    std::vector<double> slab_weights;   // nt time weights (dt); empty = all ones
    std::vector<double> values;         // nt*nx*ny*comps, cell-major raw samples
};

struct QuantityFamily {
    std::string name;
    int comps = 1;
    std::vector<SampledLevel> levels; // ordered by increasing resolution (n-index)
};

/// Truncated superlevel-set masses per coarse cell and truncation level k,
/// componentwise and split into positive/negative parts, evaluated on the
/// finest family member per k, with a Richardson-style tail estimate in k.
struct ConcentrationField {
    std::string quantity;
    int comps = 1;
    std::vector<double> k_ladder;
    int nt = 1, nx = 1, ny = 1; // coarse dims

    // [k_index][cell*comps + c]
    std::vector<std::vector<double>> pos;
    std::vector<std::vector<double>> neg;
    // [cell*comps + c]
    std::vector<double> extrap_pos;
    std::vector<double> extrap_neg;

    std::size_t coarse_cells() const {
        return static_cast<std::size_t>(nt) * nx * ny;
    }
    /// l-infinity magnitude over components of |m| = m+ + m- at one cell.
    double abs_mass(std::size_t cell, std::size_t k_index) const;
    double extrapolated_abs(std::size_t cell) const;
    double extrapolated_signed(std::size_t cell, int comp) const;
    double total_extrapolated_abs() const;
};

ConcentrationField concentration_mass(const QuantityFamily& family,
                                      const std::vector<double>& k_ladder, int coarse_nt,
                                      int coarse_nx, int coarse_ny = 1);

/// Splits a space-time concentration field into per-time-slab fields whose
/// masses sum back to the total exactly.
std::vector<ConcentrationField> time_slices(const ConcentrationField& conc);

/// Quantities trackable along a trajectory family.
enum class TrackedQuantity { Eta, Avec, Flux };

/// Evaluates eta / A / F_alpha on the snapshots of each trajectory, producing
/// the generating family for concentration_mass.
QuantityFamily family_from_trajectories(const System& system,
                                        const std::vector<Trajectory>& runs,
                                        TrackedQuantity quantity, int alpha = 0);

// ---------------------------------------------------------------------------
// Radon-Nikodym estimation with the hat kernel
// ---------------------------------------------------------------------------

/// kappa_eps: 1 on [0, eps], affine down to 0 on [eps, 2 eps], 0 beyond.
double hat_kernel(double r, double eps);

struct RnResult {
    std::vector<double> eps_ladder;
    // [eps_index][cell*comps + c]
    std::vector<std::vector<double>> density;
    std::vector<char> masked;      // per cell (mollified m_f below the floor)
    std::vector<double> estimate;  // smallest-eps densities, cell*comps
    int comps = 1;
};

/// Ratio of kappa_eps-mollified masses at each cell center of the unit torus
/// (1D when ny == 1). m_g has `comps` signed components per cell; m_f is
/// nonnegative. Cells whose denominator vanishes are masked; throws
/// MaskedAllError when nothing remains.
RnResult radon_nikodym(const std::vector<double>& m_g, int comps,
                       const std::vector<double>& m_f, int nx, int ny,
                       const std::vector<double>& eps_ladder, double mask_floor = 1e-14);

struct DominationReport {
    bool pass = false;
    double worst_ratio = 0.0;    // max |m_g| / m_f over unmasked cells
    double max_violation = 0.0;  // max(|m_g| - C m_f) over cells
};

/// Checks |m_g|(cell) <= C m_f(cell) + 1e-12 per cell.
DominationReport check_domination(const std::vector<double>& m_g_abs,
                                  const std::vector<double>& m_f, double C);

// ---------------------------------------------------------------------------
// Modified recession functions
// ---------------------------------------------------------------------------

struct RecessionProbe {
    Vec beta;                   // direction on the unit sphere (in X-bar)
    std::vector<double> s_grid; // increasing; empty = geometric 10 .. 1e4, 9 points

    static std::vector<double> default_s_grid();
};

enum class RecessionQuantity { A, Flux, EtaRel, FluxRel };

struct RecessionResult {
    Vec value;           // terminal ratio estimate (size 1 for EtaRel)
    Vec identity_value;  // relative quantities: value via the algebraic identity
    double cauchy = 0.0; // max-norm gap between the last two grid estimates
    double identity_cauchy = 0.0;
    bool truncated = false; // overflow guard shortened the grid
    int points_used = 0;
};

/// f(u_s)/eta(u_s) along u_s,i = s^{alpha_i} beta_i. Relative quantities need
/// the interior reference U and are also computed through the recession
/// identities (1 - G(U).A_inf and F_inf - grad F grad A^{-1} A_inf).
RecessionResult recession(const System& system, RecessionQuantity quantity, int alpha,
                          const RecessionProbe& probe, const Vec* U = nullptr);

// ---------------------------------------------------------------------------
// Concentration-measure relations at a strong solution
// ---------------------------------------------------------------------------

struct ConcentrationRelationsReport {
    bool pass_positive = false;   // m_eta - m_A.G(U) >= -tol per cell
    bool pass_dominated = false;  // |m_F - grad F grad A^{-1} m_A| <= C (m_eta - m_A.G(U)) + tol
    double worst_margin = 0.0;    // min over cells of the relative-entropy mass
    double worst_excess = 0.0;    // max over cells of lhs - C*rhs of the domination
    double C = 0.0;
};

/// Per-cell checks of the two relations, with U given per coarse cell and
/// m_A / m_F as signed componentwise masses (cell-major, n per cell).
ConcentrationRelationsReport concentration_relations(
    const System& system, const std::vector<double>& m_eta, const std::vector<double>& m_A,
    const std::vector<std::vector<double>>& m_F_per_alpha, const std::vector<Vec>& U_cells,
    double C, double tol_positive = 1e-8, double tol_dominated = 1e-12);

} // namespace entroflux
