#pragma once

#include <optional>
#include <vector>

#include "entroflux/measures.hpp"

namespace entroflux {

/// Relative-entropy series H(t) = sum_cells H(nu_t, U(t)) h^d plus the
/// concentration term sum (m_eta^t - m_A^t . G(U)).
struct GronwallSeries {
    std::vector<double> times;
    std::vector<double> H;             // Young-measure part
    std::vector<double> concentration; // zero unless masses supplied
    double gradient_bound = 0.0;       // sup |DU| of the reference
    double wave_speed = 0.0;           // max wave-speed bound on the coarse run

    double value(std::size_t k) const { return H[k] + concentration[k]; }
    std::size_t size() const { return times.size(); }
};

/// Per-snapshot H(nu, U): nu = empirical Young measure of the coarse run at
/// coarsening ratio `coarsen`, U = reference projected to the same supercell
/// grid. Snapshot times must coincide (GridError otherwise).
GronwallSeries relent_trajectory(const System& system, const Trajectory& coarse,
                                 const Trajectory& reference, int coarsen,
                                 const std::vector<double>* concentration_per_snapshot = nullptr);

struct GronwallFit {
    double C = 0.0;   // effective prefactor H(0) + delta_fit
    double c = 0.0;   // smallest admissible exponential rate
    double cap = 0.0;
    bool pass = false;
};

/// Smallest c on a grid of [0, c_cap] with H(t) <= (H(0) + delta) e^{ct} for
/// every snapshot, delta = 1e-10 + 0.01 H(0). Throws FitError when no
/// admissible c exists below the cap.
GronwallFit fit_gronwall(const GronwallSeries& series, double c_cap, int grid_points = 1024);

/// Documented default cap: 10 (1 + |DU|_inf max_alpha lambda_F).
double default_gronwall_cap(const GronwallSeries& series);

struct UniquenessOptions {
    Scheme scheme = Scheme::LaxFriedrichs;
    double cfl = 0.4;
    int coarsen = 4;
    int ref_multiple = 8; // reference N = ref_multiple * max(N_ladder)
    int n_snapshots = 11;
    std::vector<double> k_ladder = {10.0, 100.0, 1000.0, 10000.0};
    double amp_mismatch = 2.0; // negative control multiplies amplitudes by this
    double metric_floor = 1e-12;
    double min_rate = 0.4;
    double min_separation = 10.0;
    SolverOptions solver;
    // when set, the reference evolves these data instead of the run spec
    // (turns the whole probe into the mismatched-data control)
    std::optional<InitSpec> reference_spec;
};

struct UniquenessReport {
    std::vector<int> N_ladder;
    std::vector<GronwallSeries> series;                // per N
    std::vector<std::vector<double>> variance_series;  // per N, per snapshot
    std::vector<double> terminal_H;
    std::vector<double> terminal_variance;
    std::vector<double> concentration_mass; // total extrapolated m_eta per family prefix
    double rate_H = 0.0;        // least-squares slope of log H vs log h
    double rate_variance = 0.0;
    std::vector<GronwallFit> fits;
    double negative_ratio = 0.0; // mismatched / matched terminal H at finest N
    bool monotone_H = false;
    bool monotone_variance = false;
    bool concentration_negligible = false;
    bool pass = false;
};

/// Desk-scale refinement probe of mv-strong uniqueness: terminal relative
/// entropy, Young-measure variance and concentration masses along an
/// N-ladder against a fine reference, plus the mismatched-data control.
UniquenessReport uniqueness_probe(const System& system, const InitSpec& spec,
                                  const std::vector<int>& N_ladder, double T,
                                  const UniquenessOptions& options = {});

} // namespace entroflux
