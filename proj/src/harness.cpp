#include "entroflux/harness.hpp"

#include <cmath>

#include "entroflux/errors.hpp"

namespace entroflux {

namespace {

/// Reference field projected onto the supercell grid: cell averages of the
/// conserved variables, then state recovery.
std::vector<Vec> project_reference(const System& system, const ConservedField& ref, int coarseN,
                                   const VacuumPolicy& vacuum) {
    const TorusGrid& grid = ref.grid;
    if (grid.N % coarseN != 0) {
        throw GridError("relent_trajectory: reference grid does not divide into supercells");
    }
    const int ratio = grid.N / coarseN;
    const std::size_t coarse_cells =
        grid.d == 1 ? static_cast<std::size_t>(coarseN) : static_cast<std::size_t>(coarseN) * coarseN;
    std::vector<Vec> out(coarse_cells, Vec::Zero(ref.n));
    for (std::size_t fc = 0; fc < grid.cells(); ++fc) {
        const long ix = static_cast<long>(fc % grid.N);
        const long iy = static_cast<long>(fc / grid.N);
        const std::size_t cc = grid.d == 1
                                   ? static_cast<std::size_t>(ix / ratio)
                                   : static_cast<std::size_t>(iy / ratio) * coarseN + ix / ratio;
        out[cc] += ref.conserved(fc);
    }
    const double w = grid.d == 1 ? 1.0 / ratio : 1.0 / (static_cast<double>(ratio) * ratio);
    long clamps = 0;
    for (auto& v : out) {
        v = system.invert_A(v * w, vacuum, &clamps);
    }
    return out;
}

double ls_slope(const std::vector<double>& log_h, const std::vector<double>& log_v) {
    const std::size_t n = log_h.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += log_h[i];
        my += log_v[i];
    }
    mx /= n;
    my /= n;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (log_h[i] - mx) * (log_v[i] - my);
        den += (log_h[i] - mx) * (log_h[i] - mx);
    }
    return num / den;
}

} // namespace

GronwallSeries relent_trajectory(const System& system, const Trajectory& coarse,
                                 const Trajectory& reference, int coarsen,
                                 const std::vector<double>* concentration_per_snapshot) {
    if (coarse.snapshots.size() != reference.snapshots.size()) {
        throw GridError("relent_trajectory: trajectories have different snapshot counts");
    }
    if (coarsen < 1 || coarse.grid.N % coarsen != 0) {
        throw GridError("relent_trajectory: coarsening ratio does not divide the coarse grid");
    }
    const int coarseN = coarse.grid.N / coarsen;
    const double tol = 1e-10 * std::max(1.0, coarse.grid.T);

    GronwallSeries series;
    series.gradient_bound = reference.gradient_bound;

    const double supercell_vol =
        coarse.grid.d == 1 ? 1.0 / coarseN : 1.0 / (static_cast<double>(coarseN) * coarseN);

    for (std::size_t k = 0; k < coarse.snapshots.size(); ++k) {
        const ConservedField& snap = coarse.snapshots[k];
        const ConservedField& ref = reference.snapshots[k];
        if (std::abs(snap.t - ref.t) > tol) {
            throw GridError("relent_trajectory: snapshot times are misaligned");
        }
        const DiscreteYoungMeasure ym = empirical_young_measure(system, snap, coarseN);
        const std::vector<Vec> U = project_reference(system, ref, coarseN, {});
        double H = 0.0;
        for (std::size_t cell = 0; cell < ym.cell_count(); ++cell) {
            H += averaged_H(system, ym.cells[cell], U[cell]);
        }
        series.times.push_back(snap.t);
        series.H.push_back(H * supercell_vol);
        series.concentration.push_back(
            concentration_per_snapshot != nullptr ? (*concentration_per_snapshot)[k] : 0.0);
        for (std::size_t cell = 0; cell < snap.grid.cells(); ++cell) {
            series.wave_speed = std::max(series.wave_speed,
                                         system.wave_speed_bound(snap.state(cell)));
        }
    }
    return series;
}

GronwallFit fit_gronwall(const GronwallSeries& series, double c_cap, int grid_points) {
    if (series.size() == 0) {
        throw ConfigError("fit_gronwall: empty series");
    }
    const double H0 = series.value(0);
    const double delta = 1e-10 + 0.01 * H0;
    GronwallFit fit;
    fit.C = H0 + delta;
    fit.cap = c_cap;

    double c_star = 0.0;
    for (std::size_t k = 1; k < series.size(); ++k) {
        const double v = series.value(k);
        if (v <= fit.C || series.times[k] <= 0.0) {
            continue;
        }
        c_star = std::max(c_star, std::log(v / fit.C) / series.times[k]);
    }
    if (c_star > c_cap) {
        throw FitError("fit_gronwall: no admissible rate below the cap (needs c = " +
                       std::to_string(c_star) + ", cap = " + std::to_string(c_cap) + ")");
    }
    // smallest admissible grid value
    const double step = c_cap / grid_points;
    fit.c = (c_star == 0.0 || step == 0.0) ? 0.0 : std::ceil(c_star / step) * step;
    fit.pass = true;
    return fit;
}

double default_gronwall_cap(const GronwallSeries& series) {
    return 10.0 * (1.0 + series.gradient_bound * series.wave_speed);
}

UniquenessReport uniqueness_probe(const System& system, const InitSpec& spec,
                                  const std::vector<int>& N_ladder, double T,
                                  const UniquenessOptions& options) {
    if (N_ladder.size() < 2) {
        throw ConfigError("uniqueness_probe: the N ladder needs at least two entries");
    }
    for (std::size_t i = 1; i < N_ladder.size(); ++i) {
        if (N_ladder[i] <= N_ladder[i - 1]) {
            throw ConfigError("uniqueness_probe: N ladder must be increasing");
        }
    }

    UniquenessReport report;
    report.N_ladder = N_ladder;

    const int N_ref = options.ref_multiple * N_ladder.back();
    TorusGrid ref_grid{system.space_dim(), N_ref, T, options.cfl};
    ReferenceOptions ref_opts;
    ref_opts.solver = options.solver;
    ref_opts.n_snapshots = options.n_snapshots;
    const Trajectory reference = reference_solution(
        system, ref_grid, options.reference_spec ? *options.reference_spec : spec, ref_opts);

    InitSpec mismatched = spec;
    if (mismatched.kind == InitSpec::Kind::SmoothPeriodic) {
        mismatched.amp *= options.amp_mismatch;
    } else if (mismatched.state_a.size() > 0) {
        mismatched.state_a *= options.amp_mismatch;
    }

    RunOptions run_opts;
    run_opts.solver = options.solver;
    run_opts.n_snapshots = options.n_snapshots;

    std::vector<Trajectory> runs;
    std::vector<double> log_h, log_H, log_var;
    double matched_finest = 0.0;
    double mismatched_finest = 0.0;

    for (std::size_t i = 0; i < N_ladder.size(); ++i) {
        const int N = N_ladder[i];
        TorusGrid grid{system.space_dim(), N, T, options.cfl};
        Trajectory traj = run(system, grid, spec, options.scheme, run_opts);
        const GronwallSeries series =
            relent_trajectory(system, traj, reference, options.coarsen);
        const double terminal_H = series.value(series.size() - 1);
        report.terminal_H.push_back(terminal_H);
        report.fits.push_back(fit_gronwall(series, default_gronwall_cap(series)));

        // integrated Young-measure variance per snapshot
        std::vector<double> var_series;
        for (const auto& snap : traj.snapshots) {
            const DiscreteYoungMeasure ym =
                empirical_young_measure(system, snap, N / options.coarsen);
            double var = 0.0;
            for (const auto& cell : ym.cells) {
                var += ym_variance(cell);
            }
            var_series.push_back(var / static_cast<double>(ym.cell_count()));
        }
        const double var = var_series.back();
        report.terminal_variance.push_back(var);
        report.variance_series.push_back(std::move(var_series));
        report.series.push_back(series);

        runs.push_back(std::move(traj));
        if (runs.size() >= 2) {
            const QuantityFamily fam =
                family_from_trajectories(system, runs, TrackedQuantity::Eta);
            const ConcentrationField conc =
                concentration_mass(fam, options.k_ladder, 4, N_ladder.front() / options.coarsen);
            report.concentration_mass.push_back(conc.total_extrapolated_abs());
        } else {
            report.concentration_mass.push_back(0.0);
        }

        if (terminal_H > options.metric_floor) {
            log_h.push_back(std::log(grid.h()));
            log_H.push_back(std::log(terminal_H));
        }
        if (var > options.metric_floor) {
            log_var.push_back(std::log(var));
        }

        if (i + 1 == N_ladder.size()) {
            matched_finest = terminal_H;
            Trajectory neg = run(system, grid, mismatched, options.scheme, run_opts);
            const GronwallSeries neg_series =
                relent_trajectory(system, neg, reference, options.coarsen);
            mismatched_finest = neg_series.value(neg_series.size() - 1);
        }
    }

    report.monotone_H = true;
    report.monotone_variance = true;
    for (std::size_t i = 1; i < N_ladder.size(); ++i) {
        if (report.terminal_H[i] > report.terminal_H[i - 1] + options.metric_floor) {
            report.monotone_H = false;
        }
        if (report.terminal_variance[i] > report.terminal_variance[i - 1] + options.metric_floor) {
            report.monotone_variance = false;
        }
    }
    report.rate_H = (log_H.size() >= 2) ? ls_slope(log_h, log_H)
                                        : std::numeric_limits<double>::infinity();
    report.rate_variance = (log_var.size() >= 2 && log_var.size() == log_h.size())
                               ? ls_slope(log_h, log_var)
                               : std::numeric_limits<double>::infinity();
    report.concentration_negligible = true;
    for (double m : report.concentration_mass) {
        if (m > options.metric_floor) {
            report.concentration_negligible = false;
        }
    }
    report.negative_ratio =
        matched_finest > 0.0 ? mismatched_finest / matched_finest
                             : std::numeric_limits<double>::infinity();

    bool fits_ok = true;
    for (const auto& f : report.fits) {
        fits_ok = fits_ok && f.pass;
    }
    const bool conc_ok = report.concentration_negligible ||
                         report.concentration_mass.back() <= report.concentration_mass.front();
    report.pass = report.monotone_H && report.monotone_variance &&
                  report.rate_H >= options.min_rate && report.rate_variance >= options.min_rate &&
                  fits_ok && conc_ok && report.negative_ratio >= options.min_separation;
    return report;
}

} // namespace entroflux
