#include "entroflux/hypotheses.hpp"

#include <cmath>

#include "entroflux/errors.hpp"
#include "entroflux/relent.hpp"

namespace entroflux {

namespace {

void validate_box(const System& system, const DomainBox& box) {
    if (box.dim() != system.state_dim()) {
        throw DomainError(system.name() + ": design box has wrong dimension");
    }
    const int n = box.dim();
    for (int i = 0; i < n; ++i) {
        if (!(box.lo(i) < box.hi(i))) {
            throw DomainError("design box bounds are not ordered");
        }
    }
    // Every corner must sit strictly inside X with the system margin.
    for (int mask = 0; mask < (1 << n); ++mask) {
        Vec corner(n);
        for (int i = 0; i < n; ++i) {
            corner(i) = (mask & (1 << i)) ? box.hi(i) : box.lo(i);
        }
        if (!system.in_interior(corner, system.interior_margin())) {
            throw DomainError(system.name() + ": design box not interior to X (margin violated)");
        }
    }
}

Vec sample_box(const DomainBox& box, Rng& rng) {
    Vec u(box.dim());
    for (int i = 0; i < box.dim(); ++i) {
        u(i) = rng.uniform(box.lo(i), box.hi(i));
    }
    return u;
}

double max_abs(const Mat& m) {
    return m.cwiseAbs().maxCoeff();
}

/// Ray direction adapted to the state domain: components that must stay
/// nonnegative (density-like u1 for systems with a boundary) are folded up.
Vec adapted_direction(const System& system, Rng& rng) {
    Vec beta = rng.unit_vector(system.state_dim());
    if (std::isfinite(system.boundary_distance(Vec::Ones(system.state_dim())))) {
        beta(0) = std::abs(beta(0));
    }
    return beta;
}

Vec ray_state(const System& system, const Vec& beta, double s) {
    const Vec& e = system.scaling_exponents();
    Vec u(beta.size());
    for (int i = 0; i < beta.size(); ++i) {
        u(i) = std::pow(s, e(i)) * beta(i);
    }
    return u;
}

/// Deterministic anchor directions: coordinate axes and pairwise mixes.
std::vector<Vec> anchor_directions(const System& system) {
    const int n = system.state_dim();
    const bool fold = std::isfinite(system.boundary_distance(Vec::Ones(n)));
    std::vector<Vec> out;
    auto push = [&](Vec b) {
        if (fold) {
            b(0) = std::abs(b(0));
        }
        out.push_back(b.normalized());
    };
    for (int i = 0; i < n; ++i) {
        Vec e = Vec::Zero(n);
        e(i) = 1.0;
        push(e);
        if (i > 0 || !fold) {
            e(i) = -1.0;
            push(e);
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (double sj : {1.0, -1.0}) {
                Vec e = Vec::Zero(n);
                e(i) = 1.0;
                e(j) = sj;
                push(e);
            }
        }
    }
    return out;
}

} // namespace

std::vector<double> SampleDesign::default_s_grid() {
    std::vector<double> s;
    for (int i = 0; i <= 10; ++i) {
        s.push_back(std::pow(10.0, 1.0 + 0.5 * i)); // 10 .. 1e6
    }
    return s;
}

HypothesisReport check_H1(const System& system, const SampleDesign& design) {
    validate_box(system, design.box);
    HypothesisReport rep;
    rep.id = "H1";
    rep.tolerance = 1e-10;
    rep.seed = design.seed;
    rep.samples = design.n_samples;
    Rng rng(design.seed);
    double min_det = std::numeric_limits<double>::infinity();
    double max_cond = 0.0;
    for (int i = 0; i < design.n_samples; ++i) {
        const Vec u = sample_box(design.box, rng);
        const Mat dA = system.grad_A(u);
        min_det = std::min(min_det, std::abs(dA.determinant()));
        max_cond = std::max(max_cond, condition_number(dA));
    }
    rep.stats["min_abs_det"] = min_det;
    rep.stats["max_condition"] = max_cond;
    rep.pass = min_det > rep.tolerance;
    return rep;
}

HypothesisReport check_H2(const System& system, const SampleDesign& design) {
    validate_box(system, design.box);
    HypothesisReport rep;
    rep.id = "H2";
    rep.tolerance = 1e-8;
    rep.seed = design.seed;
    rep.samples = design.n_samples;
    const bool constrained = system.constraint() != nullptr;
    Rng rng(design.seed);
    double r_eta = 0.0, r_q = 0.0, r_sym_A = 0.0, r_sym_F = 0.0;
    double min_eta = std::numeric_limits<double>::infinity();
    for (int i = 0; i < design.n_samples; ++i) {
        const Vec u = sample_box(design.box, rng);
        const Vec g = system.G(u);
        const Mat dA = system.grad_A(u);
        const Mat dG = system.grad_G(u);
        min_eta = std::min(min_eta, system.eta(u));
        r_eta = std::max(r_eta, (system.grad_eta(u) - dA.transpose() * g).lpNorm<Eigen::Infinity>());
        const Mat symA = dG.transpose() * dA;
        r_sym_A = std::max(r_sym_A, max_abs(symA - symA.transpose()));
        for (int alpha = 0; alpha < system.space_dim(); ++alpha) {
            const Mat dF = system.grad_F(alpha, u);
            Vec rhs = system.grad_q(alpha, u);
            if (constrained) {
                rhs += system.constraint()->Lbar(alpha, u);
            }
            r_q = std::max(r_q, (dF.transpose() * g - rhs).lpNorm<Eigen::Infinity>());
            if (!constrained) {
                const Mat symF = dG.transpose() * dF;
                r_sym_F = std::max(r_sym_F, max_abs(symF - symF.transpose()));
            }
        }
    }
    rep.residuals["grad_eta_vs_G_gradA"] = r_eta;
    rep.residuals[constrained ? "grad_q_plus_Lbar_vs_G_gradF" : "grad_q_vs_G_gradF"] = r_q;
    rep.residuals["asymmetry_gradGT_gradA"] = r_sym_A;
    if (!constrained) {
        rep.residuals["asymmetry_gradGT_gradF"] = r_sym_F;
    }
    rep.stats["min_eta"] = min_eta;
    rep.pass = r_eta <= rep.tolerance && r_q <= rep.tolerance && r_sym_A <= rep.tolerance &&
               r_sym_F <= rep.tolerance && min_eta >= -1e-12;
    return rep;
}

HypothesisReport check_H3(const System& system, const SampleDesign& design) {
    validate_box(system, design.box);
    HypothesisReport rep;
    rep.id = "H3";
    rep.tolerance = 1e-10;
    rep.seed = design.seed;
    rep.samples = design.n_samples;
    Rng rng(design.seed);
    double min_eig = std::numeric_limits<double>::infinity();
    for (int i = 0; i < design.n_samples; ++i) {
        const Vec u = sample_box(design.box, rng);
        min_eig = std::min(min_eig, min_eigenvalue_symmetric(system.hessian_form(u)));
    }
    rep.stats["min_eigenvalue"] = min_eig;
    rep.pass = min_eig > rep.tolerance;
    return rep;
}

namespace {

struct RayScan {
    double sup_A = 0.0;
    double sup_F = 0.0;
    std::vector<double> curve_A; // max ratio per s over rays seen so far
    std::vector<double> curve_F;
    double terminal_A = 0.0; // max terminal |A|/eta over rays
    double first_A = 0.0;    // max first-point |A|/eta over rays
    long truncated = 0;
    long skipped = 0;
};

void scan_ray(const System& system, const Vec& beta, const std::vector<double>& s_grid,
              RayScan& scan) {
    double first = -1.0;
    double last = -1.0;
    for (std::size_t k = 0; k < s_grid.size(); ++k) {
        const Vec u = ray_state(system, beta, s_grid[k]);
        const double eta = system.eta(u);
        if (!std::isfinite(eta)) {
            ++scan.truncated;
            break;
        }
        if (eta < 1e-300) {
            ++scan.skipped;
            continue;
        }
        const double ra = system.A(u).lpNorm<Eigen::Infinity>() / eta;
        double rf = 0.0;
        for (int alpha = 0; alpha < system.space_dim(); ++alpha) {
            rf = std::max(rf, system.F(alpha, u).lpNorm<Eigen::Infinity>() / eta);
        }
        if (!std::isfinite(ra) || !std::isfinite(rf)) {
            ++scan.truncated;
            break;
        }
        scan.sup_A = std::max(scan.sup_A, ra);
        scan.sup_F = std::max(scan.sup_F, rf);
        scan.curve_A[k] = std::max(scan.curve_A[k], ra);
        scan.curve_F[k] = std::max(scan.curve_F[k], rf);
        if (first < 0.0) {
            first = ra;
        }
        last = ra;
    }
    if (first >= 0.0) {
        scan.first_A = std::max(scan.first_A, first);
        scan.terminal_A = std::max(scan.terminal_A, last);
    }
}

} // namespace

HypothesisReport check_H4(const System& system, const SampleDesign& design) {
    HypothesisReport rep;
    rep.id = "H4";
    rep.tolerance = 0.05; // threshold for the (14) classification
    rep.seed = design.seed;
    rep.s_grid = design.s_grid.empty() ? SampleDesign::default_s_grid() : design.s_grid;
    for (std::size_t i = 1; i < rep.s_grid.size(); ++i) {
        if (rep.s_grid[i] <= rep.s_grid[i - 1]) {
            throw ConfigError("check_H4: s_grid must be increasing");
        }
    }

    RayScan scan;
    scan.curve_A.assign(rep.s_grid.size(), 0.0);
    scan.curve_F.assign(rep.s_grid.size(), 0.0);
    long rays = 0;
    for (const Vec& beta : anchor_directions(system)) {
        scan_ray(system, beta, rep.s_grid, scan);
        ++rays;
    }
    Rng rng(design.seed);
    for (int i = 0; i < design.n_rays; ++i) {
        scan_ray(system, adapted_direction(system, rng), rep.s_grid, scan);
        ++rays;
    }
    rep.samples = rays;
    rep.constants["C_A"] = scan.sup_A;
    rep.constants["C_F"] = scan.sup_F;
    rep.stats["terminal_ratio_A"] = scan.terminal_A;
    rep.stats["first_ratio_A"] = scan.first_A;
    rep.stats["truncated_rays"] = static_cast<double>(scan.truncated);
    rep.stats["skipped_points"] = static_cast<double>(scan.skipped);
    rep.ratio_A = scan.curve_A;
    rep.ratio_F = scan.curve_F;
    if (scan.truncated > 0) {
        rep.notes.push_back("overflow guard: some rays truncated before the end of the s grid");
    }
    rep.holds_14 = scan.terminal_A <= rep.tolerance && scan.terminal_A <= 0.5 * scan.first_A;
    rep.pass = std::isfinite(scan.sup_A) && std::isfinite(scan.sup_F);
    return rep;
}

HypothesisReport check_H5(const System& system, const SampleDesign& design_u,
                          const SampleDesign& design_U) {
    validate_box(system, design_U.box);
    if (design_u.box.dim() != system.state_dim()) {
        throw DomainError("check_H5: u design box has wrong dimension");
    }
    HypothesisReport rep;
    rep.id = "H5";
    rep.tolerance = 0.05; // max admissible drift under sample doubling
    rep.seed = design_u.seed;

    const std::vector<double> s_grid =
        design_u.s_grid.empty() ? std::vector<double>{1e2, 1e4} : design_u.s_grid;

    // u samples: box corners (clipped into the closure), random box interior,
    // and far-field ray states. The random part is a prefix stream so that
    // doubling n_samples only appends samples and the estimate is monotone.
    const auto build_u_samples = [&](int n_random) {
        std::vector<Vec> us;
        const int n = system.state_dim();
        for (int mask = 0; mask < (1 << n); ++mask) {
            Vec corner(n);
            for (int i = 0; i < n; ++i) {
                corner(i) = (mask & (1 << i)) ? design_u.box.hi(i) : design_u.box.lo(i);
            }
            if (system.in_closure(corner)) {
                us.push_back(corner);
            }
        }
        for (const Vec& beta : anchor_directions(system)) {
            for (double s : s_grid) {
                us.push_back(ray_state(system, beta, s));
            }
        }
        Rng rng(design_u.seed);
        for (int i = 0; i < n_random; ++i) {
            Vec u = sample_box(design_u.box, rng);
            if (!system.in_closure(u)) {
                continue;
            }
            us.push_back(u);
            for (double s : s_grid) {
                us.push_back(ray_state(system, adapted_direction(system, rng), s));
            }
        }
        return us;
    };

    std::vector<Vec> refs;
    {
        Rng rng(design_U.seed + 1);
        for (int i = 0; i < design_U.n_samples; ++i) {
            refs.push_back(sample_box(design_U.box, rng));
        }
    }

    long skipped = 0;
    const auto estimate = [&](const std::vector<Vec>& us) {
        double c = 0.0;
        for (const Vec& u : us) {
            for (const Vec& U : refs) {
                const double h = relative_entropy(system, u, U);
                if (h < 1e-12) {
                    ++skipped;
                    continue;
                }
                for (int alpha = 0; alpha < system.space_dim(); ++alpha) {
                    const double f = relative_flux(system, alpha, u, U).lpNorm<Eigen::Infinity>();
                    c = std::max(c, f / h);
                }
            }
        }
        return c;
    };

    const double c_base = estimate(build_u_samples(design_u.n_samples));
    const double c_double = estimate(build_u_samples(2 * design_u.n_samples));
    const double drift = (c_base > 0.0) ? (c_double - c_base) / c_base : 0.0;

    rep.samples = static_cast<long>(design_u.n_samples) * design_U.n_samples;
    rep.constants["C_H5"] = c_double;
    rep.constants["C_H5_base"] = c_base;
    rep.constants["doubling_drift"] = drift;
    rep.stats["skipped_pairs"] = static_cast<double>(skipped);
    rep.pass = std::isfinite(c_double) && drift <= rep.tolerance;
    return rep;
}

double h2prime_integral(const System& system, const StateField2D& field) {
    const Constraint* constraint = system.constraint();
    if (constraint == nullptr) {
        throw ConfigError(system.name() + ": h2prime_integral needs a constrained system");
    }
    const int N = field.N;
    const double h = 1.0 / N;
    double integral = 0.0;
    for (int iy = 0; iy < N; ++iy) {
        for (int ix = 0; ix < N; ++ix) {
            const auto idx = [&](int jx, int jy) {
                return static_cast<std::size_t>((jy + N) % N) * N + ((jx + N) % N);
            };
            const Vec u = field.state(idx(ix, iy));
            const Vec dux = (field.state(idx(ix + 1, iy)) - field.state(idx(ix - 1, iy))) / (2.0 * h);
            const Vec duy = (field.state(idx(ix, iy + 1)) - field.state(idx(ix, iy - 1))) / (2.0 * h);
            integral += (constraint->Lbar(0, u).dot(dux) + constraint->Lbar(1, u).dot(duy)) * h * h;
        }
    }
    return integral;
}

HypothesisReport check_H2prime(const System& system, int n_fields, int N, std::uint64_t seed,
                               const std::vector<int>* project_subset, double tol_coeff) {
    const Constraint* constraint = system.constraint();
    if (constraint == nullptr) {
        throw ConfigError(system.name() + ": check_H2prime needs a constrained system");
    }
    HypothesisReport rep;
    rep.id = "H2'";
    rep.seed = seed;
    rep.samples = n_fields;
    const double h = 1.0 / N;
    rep.tolerance = tol_coeff * h;

    Rng rng(seed);
    double worst = 0.0;
    for (int f = 0; f < n_fields; ++f) {
        StateField2D field = sample_smooth_state_field(system, N, rng);
        constraint->project(field, project_subset);
        const double integral = h2prime_integral(system, field);
        worst = std::max(worst, std::abs(integral));
        rep.residuals["field_" + std::to_string(f)] = std::abs(integral);
    }
    rep.residuals["max_integral"] = worst;
    rep.stats["grid_N"] = N;
    rep.pass = worst <= rep.tolerance;
    return rep;
}

HypothesisReport check_derivatives(const System& system, const SampleDesign& design) {
    validate_box(system, design.box);
    HypothesisReport rep;
    rep.id = "D";
    rep.tolerance = 1e-5;
    rep.seed = design.seed;
    rep.samples = design.n_samples;
    const int n = system.state_dim();

    const auto fd_gradient = [&](const std::function<double(const Vec&)>& f, const Vec& u) {
        Vec g(n);
        for (int i = 0; i < n; ++i) {
            const double h = 1e-6 * std::max(1.0, std::abs(u(i)));
            Vec up = u, um = u;
            up(i) += h;
            um(i) -= h;
            g(i) = (f(up) - f(um)) / (2.0 * h);
        }
        return g;
    };
    const auto fd_jacobian = [&](const std::function<Vec(const Vec&)>& f, const Vec& u) {
        Mat j(n, n);
        for (int i = 0; i < n; ++i) {
            const double h = 1e-6 * std::max(1.0, std::abs(u(i)));
            Vec up = u, um = u;
            up(i) += h;
            um(i) -= h;
            j.col(i) = (f(up) - f(um)) / (2.0 * h);
        }
        return j;
    };
    const auto scaled = [](double dev, double mag) { return dev / (1.0 + mag); };

    Rng rng(design.seed);
    std::map<std::string, double> worst;
    for (int s = 0; s < design.n_samples; ++s) {
        const Vec u = sample_box(design.box, rng);
        {
            const Mat a = system.grad_A(u);
            const Mat f = fd_jacobian([&](const Vec& x) { return system.A(x); }, u);
            worst["grad_A"] = std::max(worst["grad_A"], scaled(max_abs(a - f), max_abs(a)));
        }
        {
            const Mat a = system.grad_G(u);
            const Mat f = fd_jacobian([&](const Vec& x) { return system.G(x); }, u);
            worst["grad_G"] = std::max(worst["grad_G"], scaled(max_abs(a - f), max_abs(a)));
        }
        {
            const Vec a = system.grad_eta(u);
            const Vec f = fd_gradient([&](const Vec& x) { return system.eta(x); }, u);
            worst["grad_eta"] = std::max(worst["grad_eta"],
                                         scaled((a - f).lpNorm<Eigen::Infinity>(),
                                                a.lpNorm<Eigen::Infinity>()));
        }
        {
            const Mat a = system.hess_eta(u);
            const Mat f = fd_jacobian([&](const Vec& x) { return system.grad_eta(x); }, u);
            worst["hess_eta"] = std::max(worst["hess_eta"], scaled(max_abs(a - f), max_abs(a)));
        }
        for (int alpha = 0; alpha < system.space_dim(); ++alpha) {
            const Mat a = system.grad_F(alpha, u);
            const Mat f = fd_jacobian([&](const Vec& x) { return system.F(alpha, x); }, u);
            worst["grad_F"] = std::max(worst["grad_F"], scaled(max_abs(a - f), max_abs(a)));
            const Vec aq = system.grad_q(alpha, u);
            const Vec fq = fd_gradient([&](const Vec& x) { return system.q(alpha, x); }, u);
            worst["grad_q"] = std::max(worst["grad_q"],
                                       scaled((aq - fq).lpNorm<Eigen::Infinity>(),
                                              aq.lpNorm<Eigen::Infinity>()));
        }
        {
            // second derivatives of A against differences of grad_A rows
            const std::vector<Mat> ha = system.hess_A(u);
            double dev = 0.0, mag = 0.0;
            for (int i = 0; i < n; ++i) {
                const Mat f = fd_jacobian(
                    [&](const Vec& x) { return Vec(system.grad_A(x).row(i).transpose()); }, u);
                const Mat sym = 0.5 * (f + f.transpose());
                dev = std::max(dev, max_abs(ha[i] - sym));
                mag = std::max(mag, max_abs(ha[i]));
            }
            worst["hess_A"] = std::max(worst["hess_A"], scaled(dev, mag));
        }
    }
    rep.pass = true;
    for (const auto& [key, val] : worst) {
        rep.residuals[key] = val;
        rep.pass = rep.pass && val <= rep.tolerance;
    }
    return rep;
}

std::vector<HypothesisReport> check_all(const System& system, const SampleDesign& design,
                                        int h2prime_fields, int h2prime_N, int h5_u_samples,
                                        int h5_U_samples) {
    std::vector<HypothesisReport> out;
    out.push_back(check_H1(system, design));
    out.push_back(check_H2(system, design));
    out.push_back(check_H3(system, design));
    out.push_back(check_H4(system, design));
    out.push_back(check_derivatives(system, design));
    SampleDesign du = design;
    // H5 probes the closure: widen the u box toward the boundary.
    const Vec span = design.box.hi - design.box.lo;
    du.box.lo = design.box.lo - 0.45 * span;
    du.box.hi = design.box.hi + 4.0 * span;
    if (std::isfinite(system.boundary_distance(Vec::Ones(system.state_dim())))) {
        du.box.lo(0) = 0.0;
    }
    du.n_samples = h5_u_samples > 0 ? h5_u_samples : std::max(20, design.n_samples / 10);
    SampleDesign dU = design;
    dU.n_samples = h5_U_samples > 0 ? h5_U_samples : std::max(10, design.n_samples / 40);
    out.push_back(check_H5(system, du, dU));
    if (system.constraint() != nullptr) {
        out.push_back(check_H2prime(system, h2prime_fields, h2prime_N, design.seed));
    }
    return out;
}

} // namespace entroflux
