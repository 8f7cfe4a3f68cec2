#include "entroflux/solver.hpp"

#include <cmath>

#include "entroflux/errors.hpp"
#include "entroflux/parallel.hpp"

namespace entroflux {

namespace {

// 4-point Gauss-Legendre nodes/weights on [-1/2, 1/2]
constexpr double kGaussNode[4] = {-0.43056815579702629, -0.16999052179242813,
                                  0.16999052179242813, 0.43056815579702629};
constexpr double kGaussWeight[4] = {0.17392742256872693, 0.32607257743127307,
                                    0.32607257743127307, 0.17392742256872693};

std::size_t wrap_index(const TorusGrid& grid, long ix, long iy) {
    const long N = grid.N;
    ix = ((ix % N) + N) % N;
    if (grid.d == 1) {
        return static_cast<std::size_t>(ix);
    }
    iy = ((iy % N) + N) % N;
    return static_cast<std::size_t>(iy) * N + ix;
}

Vec eval_init_state(const InitSpec& spec, int n, double x, double y, int d) {
    switch (spec.kind) {
    case InitSpec::Kind::Constant:
        return spec.state_a;
    case InitSpec::Kind::Riemann:
        return (x < 0.5) ? spec.state_a : spec.state_b;
    case InitSpec::Kind::Oscillatory:
        return spec.state_a; // handled per cell, not per point
    case InitSpec::Kind::SmoothPeriodic: {
        Vec u(n);
        for (int c = 0; c < n; ++c) {
            double profile = std::sin(2.0 * M_PI * spec.frequency * x + spec.phase(c));
            if (d == 2) {
                profile *= std::sin(2.0 * M_PI * spec.frequency * y + spec.phase(c));
            }
            u(c) = spec.base(c) + spec.amp(c) * profile;
        }
        return u;
    }
    }
    throw ConfigError("unknown init spec kind");
}

} // namespace

InitSpec InitSpec::constant(Vec u) {
    InitSpec s;
    s.kind = Kind::Constant;
    s.state_a = std::move(u);
    return s;
}

InitSpec InitSpec::riemann(Vec left, Vec right) {
    InitSpec s;
    s.kind = Kind::Riemann;
    s.state_a = std::move(left);
    s.state_b = std::move(right);
    return s;
}

InitSpec InitSpec::oscillatory(Vec a, Vec b, int cell_frequency) {
    InitSpec s;
    s.kind = Kind::Oscillatory;
    s.state_a = std::move(a);
    s.state_b = std::move(b);
    s.frequency = cell_frequency;
    return s;
}

InitSpec InitSpec::smooth_periodic(Vec base, Vec amp, int frequency, Vec phase) {
    InitSpec s;
    s.kind = Kind::SmoothPeriodic;
    s.base = std::move(base);
    s.amp = std::move(amp);
    s.frequency = frequency;
    s.phase = phase.size() == 0 ? Vec::Zero(s.base.size()) : std::move(phase);
    return s;
}

Vec ConservedField::totals() const {
    Vec sum = Vec::Zero(n);
    for (std::size_t i = 0; i < grid.cells(); ++i) {
        sum += conserved(i);
    }
    return sum * grid.cell_volume();
}

double ConservedField::total_entropy(const System& system) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.cells(); ++i) {
        sum += system.eta(state(i));
    }
    return sum * grid.cell_volume();
}

std::string scheme_name(Scheme s) {
    return s == Scheme::LaxFriedrichs ? "lax-friedrichs" : "rusanov";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "lax-friedrichs") {
        return Scheme::LaxFriedrichs;
    }
    if (name == "rusanov") {
        return Scheme::Rusanov;
    }
    throw ConfigError("unknown scheme '" + name + "' (lax-friedrichs, rusanov)");
}

ConservedField init_field(const System& system, const TorusGrid& grid, const InitSpec& spec,
                          const VacuumPolicy& vacuum) {
    if (grid.d != system.space_dim()) {
        throw GridError(system.name() + ": grid dimension does not match the system");
    }
    const int n = system.state_dim();
    ConservedField field;
    field.grid = grid;
    field.n = n;
    field.t = 0.0;
    field.v.assign(grid.cells() * n, 0.0);
    field.u.assign(grid.cells() * n, 0.0);

    const auto check_state = [&](const Vec& s) {
        if (s.size() != n || !system.in_closure(s)) {
            throw DomainError("initial state outside the closure of X");
        }
    };

    const double h = grid.h();
    const int ny = grid.d == 2 ? grid.N : 1;
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < grid.N; ++ix) {
            const std::size_t cell = static_cast<std::size_t>(iy) * (grid.d == 2 ? grid.N : 0) + ix;
            Vec vavg = Vec::Zero(n);
            switch (spec.kind) {
            case InitSpec::Kind::Constant:
                check_state(spec.state_a);
                vavg = system.A(spec.state_a);
                break;
            case InitSpec::Kind::Oscillatory: {
                check_state(spec.state_a);
                check_state(spec.state_b);
                const int block = std::max(1, spec.frequency);
                const bool odd = ((ix / block) + (grid.d == 2 ? iy / block : 0)) % 2 == 1;
                vavg = system.A(odd ? spec.state_b : spec.state_a);
                break;
            }
            case InitSpec::Kind::Riemann: {
                check_state(spec.state_a);
                check_state(spec.state_b);
                const double x = (ix + 0.5) * h;
                vavg = system.A(x < 0.5 ? spec.state_a : spec.state_b);
                break;
            }
            case InitSpec::Kind::SmoothPeriodic: {
                // cell average of A(u(x)) by tensor Gauss quadrature
                const double xc = (ix + 0.5) * h;
                const double yc = (iy + 0.5) * h;
                if (grid.d == 1) {
                    for (int gx = 0; gx < 4; ++gx) {
                        const Vec u = eval_init_state(spec, n, xc + kGaussNode[gx] * h, 0.0, 1);
                        check_state(u);
                        vavg += kGaussWeight[gx] * system.A(u);
                    }
                } else {
                    for (int gx = 0; gx < 4; ++gx) {
                        for (int gy = 0; gy < 4; ++gy) {
                            const Vec u = eval_init_state(spec, n, xc + kGaussNode[gx] * h,
                                                          yc + kGaussNode[gy] * h, 2);
                            check_state(u);
                            vavg += kGaussWeight[gx] * kGaussWeight[gy] * system.A(u);
                        }
                    }
                }
                break;
            }
            }
            Eigen::Map<Vec>(field.v.data() + cell * n, n) = vavg;
            Eigen::Map<Vec>(field.u.data() + cell * n, n) =
                system.invert_A(vavg, vacuum, &field.vacuum_clamps);
        }
    }
    return field;
}

namespace {

double max_wave_speed(const System& system, const ConservedField& field) {
    double lam = 0.0;
    for (std::size_t i = 0; i < field.grid.cells(); ++i) {
        lam = std::max(lam, system.wave_speed_bound(field.state(i)));
    }
    return lam;
}

} // namespace

ConservedField step(const System& system, const ConservedField& field, Scheme scheme,
                    const SolverOptions& options, double dt_clip, StepRecord* record) {
    if (!system.solver_supported()) {
        throw ConfigError(system.name() + ": no finite-volume solver for this system");
    }
    const TorusGrid& grid = field.grid;
    const int n = field.n;
    const int d = grid.d;
    const double h = grid.h();
    const double lam_max = max_wave_speed(system, field) * options.wave_speed_safety;
    if (lam_max <= 0.0) {
        // constant-in-time state with zero speeds; advance by the clip or h
        ConservedField next = field;
        next.t += (dt_clip > 0.0 ? dt_clip : h);
        if (record != nullptr) {
            *record = {next.t, next.t - field.t, field.total_entropy(system), 0.0, 0.0};
        }
        return next;
    }
    double dt = grid.cfl * h / (d * lam_max);
    if (dt_clip > 0.0) {
        dt = std::min(dt, dt_clip);
    }

    ConservedField next = field;
    next.t = field.t + dt;

    const int N = grid.N;
    const std::size_t cells = grid.cells();

    // Numerical fluxes per direction at the right face of each cell.
    std::vector<std::vector<double>> flux(d, std::vector<double>(cells * n, 0.0));
    std::vector<std::vector<double>> eflux(d, std::vector<double>(cells, 0.0));
    const double lf_coeff = h / (2.0 * d * dt);

    for (int alpha = 0; alpha < d; ++alpha) {
        parallel_for(
            cells,
            [&](std::size_t cell) {
                const long ix = static_cast<long>(cell % N);
                const long iy = static_cast<long>(cell / N);
                const std::size_t right = (alpha == 0) ? wrap_index(grid, ix + 1, iy)
                                                       : wrap_index(grid, ix, iy + 1);
                const Vec uL = field.state(cell);
                const Vec uR = field.state(right);
                const Vec fL = system.F(alpha, uL);
                const Vec fR = system.F(alpha, uR);
                const Vec vL = field.conserved(cell);
                const Vec vR = field.conserved(right);
                double diff;
                if (scheme == Scheme::LaxFriedrichs) {
                    diff = lf_coeff;
                } else {
                    diff = 0.5 * options.wave_speed_safety *
                           std::max(system.wave_speed_bound(uL), system.wave_speed_bound(uR));
                }
                Eigen::Map<Vec>(flux[alpha].data() + cell * n, n) =
                    0.5 * (fL + fR) - diff * (vR - vL);
                eflux[alpha][cell] = 0.5 * (system.q(alpha, uL) + system.q(alpha, uR)) -
                                     diff * (system.eta(uR) - system.eta(uL));
            },
            options.n_threads);
    }

    double dissipation = 0.0;
    double violation = 0.0;
    double entropy_total = 0.0;
    std::vector<double> eta_residual(cells, 0.0);

    parallel_for(
        cells,
        [&](std::size_t cell) {
            const long ix = static_cast<long>(cell % N);
            const long iy = static_cast<long>(cell / N);
            Vec v = field.conserved(cell);
            double qdiv = 0.0;
            for (int alpha = 0; alpha < d; ++alpha) {
                const std::size_t left = (alpha == 0) ? wrap_index(grid, ix - 1, iy)
                                                      : wrap_index(grid, ix, iy - 1);
                const Eigen::Map<const Vec> fR(flux[alpha].data() + cell * n, n);
                const Eigen::Map<const Vec> fL(flux[alpha].data() + left * n, n);
                v -= (dt / h) * (fR - fL);
                qdiv += (eflux[alpha][cell] - eflux[alpha][left]) / h;
            }
            Eigen::Map<Vec>(next.v.data() + cell * n, n) = v;
            const Vec u = system.invert_A(v, options.vacuum, &next.vacuum_clamps);
            Eigen::Map<Vec>(next.u.data() + cell * n, n) = u;
            eta_residual[cell] =
                (system.eta(u) - system.eta(field.state(cell))) / dt + qdiv;
        },
        options.n_threads);

    const double vol = grid.cell_volume();
    for (std::size_t cell = 0; cell < cells; ++cell) {
        const double r = eta_residual[cell];
        if (r < 0.0) {
            dissipation -= r * vol * dt;
        } else {
            violation += r * vol * dt;
        }
        entropy_total += system.eta(next.state(cell));
        if (next.conserved(cell).lpNorm<Eigen::Infinity>() > options.blowup_ceiling) {
            throw BlowupError("solver state exceeded the blowup ceiling");
        }
    }

    if (record != nullptr) {
        *record = {next.t, dt, entropy_total * vol, dissipation, violation};
    }
    return next;
}

Trajectory run(const System& system, const TorusGrid& grid, const InitSpec& spec, Scheme scheme,
               const RunOptions& options) {
    Trajectory traj;
    traj.scheme = scheme;
    traj.grid = grid;

    ConservedField field = init_field(system, grid, spec, options.solver.vacuum);
    traj.snapshots.push_back(field);

    std::vector<double> snap_times;
    if (!options.store_every_step) {
        const int k = std::max(2, options.n_snapshots);
        for (int i = 1; i < k; ++i) {
            snap_times.push_back(grid.T * i / (k - 1));
        }
    }

    std::size_t next_snap = 0;
    const double t_eps = 1e-13 * std::max(1.0, grid.T);
    while (field.t < grid.T - t_eps) {
        double clip = grid.T - field.t;
        if (!options.store_every_step && next_snap < snap_times.size()) {
            clip = std::min(clip, snap_times[next_snap] - field.t);
        }
        StepRecord rec;
        field = step(system, field, scheme, options.solver, clip, &rec);
        traj.steps.push_back(rec);
        if (options.store_every_step) {
            traj.snapshots.push_back(field);
        } else if (next_snap < snap_times.size() &&
                   field.t >= snap_times[next_snap] - t_eps) {
            traj.snapshots.push_back(field);
            ++next_snap;
        }
    }
    if (std::abs(traj.snapshots.back().t - grid.T) > t_eps) {
        traj.snapshots.push_back(field);
    }
    return traj;
}

std::vector<double> Trajectory::snapshot_times() const {
    std::vector<double> out;
    out.reserve(snapshots.size());
    for (const auto& s : snapshots) {
        out.push_back(s.t);
    }
    return out;
}

TestBank default_test_bank(int state_dim, int space_dim) {
    TestBank bank;
    const int comps = std::min(state_dim, 2);
    if (space_dim == 1) {
        for (int k = 1; k <= 2; ++k) {
            for (int c = 0; c < comps; ++c) {
                bank.phi.push_back({{k}, c, false});
                bank.phi.push_back({{k}, c, true});
            }
        }
    } else {
        const std::vector<std::vector<int>> ks = {{1, 0}, {0, 1}, {1, 1}};
        for (const auto& k : ks) {
            for (int c = 0; c < comps; ++c) {
                bank.phi.push_back({k, c, false});
                bank.phi.push_back({k, c, true});
            }
        }
    }
    return bank;
}

namespace {

double time_cutoff(double t, double T) {
    const double c = std::cos(0.5 * M_PI * t / T);
    return c * c;
}

double time_cutoff_deriv(double t, double T) {
    return -(0.5 * M_PI / T) * std::sin(M_PI * t / T);
}

} // namespace

WeakResiduals weak_residual(const Trajectory& traj, const System& system, const TestBank& bank) {
    if (bank.phi.empty() && bank.n_zeta == 0) {
        throw ConfigError("weak_residual: empty test bank");
    }
    if (traj.snapshots.size() < 2) {
        throw ConfigError("weak_residual: trajectory needs at least two snapshots");
    }
    const TorusGrid& grid = traj.grid;
    const double T = grid.T;
    const double vol = grid.cell_volume();
    const int N = grid.N;
    const std::size_t cells = grid.cells();

    WeakResiduals out;

    for (const PhiTest& phi : bank.phi) {
        // spatial mode values and derivative factors per cell
        std::vector<double> mode(cells), dmode(grid.d * cells);
        for (std::size_t cell = 0; cell < cells; ++cell) {
            const double x = (static_cast<double>(cell % N) + 0.5) * grid.h();
            const double y = grid.d == 2 ? (static_cast<double>(cell / N) + 0.5) * grid.h() : 0.0;
            const double theta = 2.0 * M_PI * (phi.k[0] * x + (grid.d == 2 ? phi.k[1] * y : 0.0));
            mode[cell] = phi.use_sin ? std::sin(theta) : std::cos(theta);
            const double dtheta = phi.use_sin ? std::cos(theta) : -std::sin(theta);
            for (int alpha = 0; alpha < grid.d; ++alpha) {
                dmode[alpha * cells + cell] = 2.0 * M_PI * phi.k[alpha] * dtheta;
            }
        }

        // S(t) = sum_x A(u).d_t phi + F_alpha(u).d_alpha phi, integrated by
        // the trapezoid rule over snapshot times.
        const auto integrand = [&](const ConservedField& f) {
            const double psi = time_cutoff(f.t, T);
            const double dpsi = time_cutoff_deriv(f.t, T);
            double s = 0.0;
            for (std::size_t cell = 0; cell < cells; ++cell) {
                const Vec u = f.state(cell);
                s += system.A(u)(phi.component) * dpsi * mode[cell];
                for (int alpha = 0; alpha < grid.d; ++alpha) {
                    s += system.F(alpha, u)(phi.component) * psi * dmode[alpha * cells + cell];
                }
            }
            return s * vol;
        };

        double integral = 0.0;
        double prev_val = integrand(traj.snapshots[0]);
        for (std::size_t k = 1; k < traj.snapshots.size(); ++k) {
            const double cur_val = integrand(traj.snapshots[k]);
            integral += 0.5 * (prev_val + cur_val) * (traj.snapshots[k].t - traj.snapshots[k - 1].t);
            prev_val = cur_val;
        }
        // initial term: psi(0) = 1
        double init_term = 0.0;
        const ConservedField& f0 = traj.snapshots.front();
        for (std::size_t cell = 0; cell < cells; ++cell) {
            init_term += system.A(f0.state(cell))(phi.component) * mode[cell];
        }
        out.phi.push_back(integral + init_term * vol);
    }

    // Entropy tests evaluated in Abel-summation form: the quadrature of
    // int eta zeta' + zeta(0) int eta_0 that is exactly nonnegative for
    // nonincreasing discrete total entropy.
    std::vector<double> energy;
    energy.reserve(traj.snapshots.size());
    for (const auto& snap : traj.snapshots) {
        energy.push_back(snap.total_entropy(system));
    }
    for (int j = 1; j <= bank.n_zeta; ++j) {
        const auto zeta = [&](double t) { return std::pow(time_cutoff(t, T), j); };
        double value = zeta(traj.snapshots.front().t) * energy.front();
        for (std::size_t k = 0; k + 1 < traj.snapshots.size(); ++k) {
            value += energy[k] * (zeta(traj.snapshots[k + 1].t) - zeta(traj.snapshots[k].t));
        }
        out.zeta.push_back(value);
    }
    return out;
}

Trajectory reference_solution(const System& system, const TorusGrid& grid, const InitSpec& spec,
                              const ReferenceOptions& options) {
    ConservedField field = init_field(system, grid, spec, options.solver.vacuum);
    const int N = grid.N;
    const std::size_t cells = grid.cells();

    const auto max_jump = [&](const ConservedField& f) {
        double jump = 0.0;
        for (std::size_t cell = 0; cell < cells; ++cell) {
            const long ix = static_cast<long>(cell % N);
            const long iy = static_cast<long>(cell / N);
            for (int alpha = 0; alpha < grid.d; ++alpha) {
                const std::size_t nb = (alpha == 0) ? wrap_index(grid, ix + 1, iy)
                                                    : wrap_index(grid, ix, iy + 1);
                jump = std::max(jump, (f.state(nb) - f.state(cell)).lpNorm<Eigen::Infinity>());
            }
        }
        return jump;
    };

    double scale = 0.0;
    for (std::size_t cell = 0; cell < cells; ++cell) {
        scale = std::max(scale, field.state(cell).lpNorm<Eigen::Infinity>());
    }
    const double jump0 = max_jump(field);
    if (jump0 > options.jump_tolerance * (1.0 + scale)) {
        throw ShockError("initial data are not W^{1,inf}-resolved on this grid");
    }

    Trajectory traj;
    traj.scheme = Scheme::LaxFriedrichs;
    traj.grid = grid;
    traj.snapshots.push_back(field);
    traj.gradient_bound = jump0 / grid.h();

    std::vector<double> snap_times;
    const int k = std::max(2, options.n_snapshots);
    for (int i = 1; i < k; ++i) {
        snap_times.push_back(grid.T * i / (k - 1));
    }
    const double gradient_ceiling =
        options.gradient_growth_limit * std::max(jump0, 1e-12) / grid.h();

    std::size_t next_snap = 0;
    const double t_eps = 1e-13 * std::max(1.0, grid.T);
    while (field.t < grid.T - t_eps) {
        double clip = grid.T - field.t;
        if (next_snap < snap_times.size()) {
            clip = std::min(clip, snap_times[next_snap] - field.t);
        }
        StepRecord rec;
        field = step(system, field, Scheme::LaxFriedrichs, options.solver, clip, &rec);
        traj.steps.push_back(rec);
        const double grad = max_jump(field) / grid.h();
        traj.gradient_bound = std::max(traj.gradient_bound, grad);
        if (jump0 > 0.0 && grad > gradient_ceiling) {
            throw ShockError("gradient monitor tripped before the requested final time");
        }
        if (next_snap < snap_times.size() && field.t >= snap_times[next_snap] - t_eps) {
            traj.snapshots.push_back(field);
            ++next_snap;
        }
    }
    if (std::abs(traj.snapshots.back().t - grid.T) > t_eps) {
        traj.snapshots.push_back(field);
    }
    return traj;
}

} // namespace entroflux
