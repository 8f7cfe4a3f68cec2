#pragma once

#include <optional>
#include <string>
#include <vector>

#include "entroflux/systems.hpp"

namespace entroflux {

/// Uniform grid on the periodic unit torus, d in {1, 2}.
struct TorusGrid {
    int d = 1;
    int N = 64;
    double T = 0.1;
    double cfl = 0.4;

    double h() const { return 1.0 / N; }
    std::size_t cells() const {
        return d == 1 ? static_cast<std::size_t>(N) : static_cast<std::size_t>(N) * N;
    }
    double cell_volume() const { return d == 1 ? h() : h() * h(); }
};

/// Initial-data specification in the system's state variables u.
struct InitSpec {
    enum class Kind { Constant, Riemann, Oscillatory, SmoothPeriodic };
    Kind kind = Kind::Constant;

    Vec state_a;      // constant / riemann left / oscillatory a
    Vec state_b;      // riemann right / oscillatory b
    int frequency = 1; // oscillatory block length in cells / smooth mode number

    // smooth-periodic: u_c(x) = base_c + amp_c * sin(2 pi frequency x + phase_c)
    // (times the same profile in y when d = 2)
    Vec base;
    Vec amp;
    Vec phase;

    static InitSpec constant(Vec u);
    static InitSpec riemann(Vec left, Vec right);
    static InitSpec oscillatory(Vec a, Vec b, int cell_frequency);
    static InitSpec smooth_periodic(Vec base, Vec amp, int frequency, Vec phase = {});
};

/// Grid of conserved values v = A(u) with the recovered states alongside.
struct ConservedField {
    TorusGrid grid;
    int n = 0;
    double t = 0.0;
    std::vector<double> v; // cells * n, row-major
    std::vector<double> u;
    long vacuum_clamps = 0;

    Vec conserved(std::size_t cell) const {
        return Eigen::Map<const Vec>(v.data() + cell * n, n);
    }
    Vec state(std::size_t cell) const {
        return Eigen::Map<const Vec>(u.data() + cell * n, n);
    }
    /// Per-component totals sum(v) * h^d.
    Vec totals() const;
    double total_entropy(const System& system) const;
};

enum class Scheme { LaxFriedrichs, Rusanov };

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

struct SolverOptions {
    VacuumPolicy vacuum;
    double blowup_ceiling = 1e6;
    double wave_speed_safety = 1.2;
    int n_threads = 1;
};

struct StepRecord {
    double t = 0.0;  // time after the step
    double dt = 0.0;
    double entropy_total = 0.0; // after the step
    double dissipation = 0.0;   // integral of the negative entropy residual part
    double violation = 0.0;     // integral of the positive part (should be ~0)
};

struct Trajectory {
    Scheme scheme = Scheme::LaxFriedrichs;
    TorusGrid grid;
    std::vector<ConservedField> snapshots; // first at t = 0, last at t = T
    std::vector<StepRecord> steps;
    double gradient_bound = 0.0; // reference runs: sup over time of max |Du|/h

    const ConservedField& initial() const { return snapshots.front(); }
    const ConservedField& final() const { return snapshots.back(); }
    std::vector<double> snapshot_times() const;
};

struct RunOptions {
    SolverOptions solver;
    int n_snapshots = 11;        // evenly spaced including t = 0 and t = T
    bool store_every_step = false;
};

/// Cell-averaged initial data (Gauss quadrature of A(u(x)) for smooth specs).
ConservedField init_field(const System& system, const TorusGrid& grid, const InitSpec& spec,
                          const VacuumPolicy& vacuum = {});

/// One conservative update; dt is chosen from the CFL condition unless
/// dt_clip limits it (used to land exactly on snapshot times).
ConservedField step(const System& system, const ConservedField& field, Scheme scheme,
                    const SolverOptions& options, double dt_clip = -1.0,
                    StepRecord* record = nullptr);

Trajectory run(const System& system, const TorusGrid& grid, const InitSpec& spec, Scheme scheme,
               const RunOptions& options = {});

/// Smooth space-time test functions: Fourier modes with a smooth time cutoff
/// vanishing at t = T.
struct PhiTest {
    std::vector<int> k; // d wave numbers
    int component = 0;
    bool use_sin = false;
};

struct TestBank {
    std::vector<PhiTest> phi;
    int n_zeta = 2; // entropy tests zeta_j(t) = cos^{2j}(pi t / (2T)), j = 1..n_zeta
};

TestBank default_test_bank(int state_dim, int space_dim);

struct WeakResiduals {
    std::vector<double> phi;  // one per phi test (should -> 0 under refinement)
    std::vector<double> zeta; // signed entropy values (nonnegativity asserted)
};

/// Discrete weak form of the system and the entropy balance along a stored
/// trajectory, with nu = Dirac at the trajectory values and no concentration.
WeakResiduals weak_residual(const Trajectory& traj, const System& system, const TestBank& bank);

struct ReferenceOptions {
    SolverOptions solver;
    int n_snapshots = 11;
    double gradient_growth_limit = 5.0; // ShockError when max|Du| exceeds this times its initial value
    double jump_tolerance = 0.2;        // initial adjacent jumps above tol*(1+|u|) are not W^{1,inf}
};

/// Fine-grid strong-solution surrogate: a run of smooth data with a gradient
/// monitor; throws ShockError on discontinuous data or gradient blow-up.
Trajectory reference_solution(const System& system, const TorusGrid& grid, const InitSpec& spec,
                              const ReferenceOptions& options = {});

} // namespace entroflux
