#include "entroflux/measures.hpp"

#include <algorithm>
#include <cmath>

#include "entroflux/errors.hpp"

namespace entroflux {

DiscreteYoungMeasure empirical_young_measure(const System& system, const ConservedField& fine,
                                             int coarseN, double merge_tol) {
    const TorusGrid& grid = fine.grid;
    if (coarseN < 1 || grid.N % coarseN != 0) {
        throw GridError("empirical_young_measure: coarse grid does not divide the fine grid");
    }
    const int ratio = grid.N / coarseN;
    DiscreteYoungMeasure ym;
    ym.coarseN = coarseN;
    ym.d = grid.d;
    ym.provenance = system.name() + " N=" + std::to_string(grid.N) +
                    " coarsen=" + std::to_string(ratio);
    const std::size_t coarse_cells =
        grid.d == 1 ? static_cast<std::size_t>(coarseN) : static_cast<std::size_t>(coarseN) * coarseN;
    ym.cells.resize(coarse_cells);

    const long fine_per_coarse = grid.d == 1 ? ratio : static_cast<long>(ratio) * ratio;
    const double w = 1.0 / static_cast<double>(fine_per_coarse);

    for (std::size_t fc = 0; fc < grid.cells(); ++fc) {
        const long ix = static_cast<long>(fc % grid.N);
        const long iy = static_cast<long>(fc / grid.N);
        const std::size_t cc = grid.d == 1
                                   ? static_cast<std::size_t>(ix / ratio)
                                   : static_cast<std::size_t>(iy / ratio) * coarseN + ix / ratio;
        MeasureCell& cell = ym.cells[cc];
        const Vec u = fine.state(fc);
        bool merged = false;
        for (std::size_t a = 0; a < cell.atoms.size(); ++a) {
            if ((cell.atoms[a] - u).lpNorm<Eigen::Infinity>() <= merge_tol) {
                cell.weights[a] += w;
                merged = true;
                break;
            }
        }
        if (!merged) {
            cell.atoms.push_back(u);
            cell.weights.push_back(w);
        }
    }
    return ym;
}

double ym_average(const MeasureCell& cell, const std::function<double(const Vec&)>& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < cell.atoms.size(); ++i) {
        s += cell.weights[i] * f(cell.atoms[i]);
    }
    return s;
}

Vec ym_average_vec(const MeasureCell& cell, const std::function<Vec(const Vec&)>& f) {
    Vec s = Vec::Zero(f(cell.atoms.front()).size());
    for (std::size_t i = 0; i < cell.atoms.size(); ++i) {
        s += cell.weights[i] * f(cell.atoms[i]);
    }
    return s;
}

double ym_variance(const MeasureCell& cell) {
    Vec mean = Vec::Zero(cell.atoms.front().size());
    for (std::size_t i = 0; i < cell.atoms.size(); ++i) {
        mean += cell.weights[i] * cell.atoms[i];
    }
    double var = 0.0;
    for (std::size_t i = 0; i < cell.atoms.size(); ++i) {
        var += cell.weights[i] * (cell.atoms[i] - mean).squaredNorm();
    }
    return var;
}

// ---------------------------------------------------------------------------

double ConcentrationField::abs_mass(std::size_t cell, std::size_t k_index) const {
    double worst = 0.0;
    for (int c = 0; c < comps; ++c) {
        worst = std::max(worst, pos[k_index][cell * comps + c] + neg[k_index][cell * comps + c]);
    }
    return worst;
}

double ConcentrationField::extrapolated_abs(std::size_t cell) const {
    double worst = 0.0;
    for (int c = 0; c < comps; ++c) {
        worst = std::max(worst, extrap_pos[cell * comps + c] + extrap_neg[cell * comps + c]);
    }
    return worst;
}

double ConcentrationField::extrapolated_signed(std::size_t cell, int comp) const {
    return extrap_pos[cell * comps + comp] - extrap_neg[cell * comps + comp];
}

double ConcentrationField::total_extrapolated_abs() const {
    double total = 0.0;
    for (std::size_t cell = 0; cell < coarse_cells(); ++cell) {
        total += extrapolated_abs(cell);
    }
    return total;
}

namespace {

/// Tail estimate from the nonincreasing ladder p(k_0) >= p(k_1) >= ...:
/// geometric extrapolation of the decrements when three levels exist.
double extrapolate_ladder(const std::vector<double>& p) {
    const std::size_t k = p.size();
    if (k == 1) {
        return p.back();
    }
    const double d_last = p[k - 2] - p[k - 1];
    if (d_last <= 0.0) {
        return p.back();
    }
    if (k >= 3) {
        const double d_prev = p[k - 3] - p[k - 2];
        if (d_prev > d_last) {
            const double q = d_last / d_prev;
            return std::max(0.0, p.back() - d_last * q / (1.0 - q));
        }
    }
    return std::max(0.0, p.back() - d_last);
}

} // namespace

ConcentrationField concentration_mass(const QuantityFamily& family,
                                      const std::vector<double>& k_ladder, int coarse_nt,
                                      int coarse_nx, int coarse_ny) {
    if (family.levels.size() < 2) {
        throw ConfigError("concentration_mass: a generating family needs at least two levels");
    }
    for (std::size_t i = 1; i < k_ladder.size(); ++i) {
        if (k_ladder[i] <= k_ladder[i - 1]) {
            throw ConfigError("concentration_mass: k_ladder must be increasing");
        }
    }
    ConcentrationField conc;
    conc.quantity = family.name;
    conc.comps = family.comps;
    conc.k_ladder = k_ladder;
    conc.nt = coarse_nt;
    conc.nx = coarse_nx;
    conc.ny = coarse_ny;
    const std::size_t cc = conc.coarse_cells() * family.comps;
    conc.pos.assign(k_ladder.size(), std::vector<double>(cc, 0.0));
    conc.neg.assign(k_ladder.size(), std::vector<double>(cc, 0.0));

    // finest available n per k, then extrapolate in k
    const SampledLevel& fine = family.levels.back();
    for (std::size_t ki = 0; ki < k_ladder.size(); ++ki) {
        const double k = k_ladder[ki];
        for (long it = 0; it < fine.nt; ++it) {
            const int ct = static_cast<int>(it * coarse_nt / fine.nt);
            const double slab_w =
                fine.slab_weights.empty() ? 1.0 : fine.slab_weights[static_cast<std::size_t>(it)];
            const double measure = fine.cell_measure * slab_w;
            for (long iy = 0; iy < fine.ny; ++iy) {
                const int cy = static_cast<int>(iy * coarse_ny / fine.ny);
                for (long ix = 0; ix < fine.nx; ++ix) {
                    const int cx = static_cast<int>(ix * coarse_nx / fine.nx);
                    const std::size_t fcell =
                        (static_cast<std::size_t>(it) * fine.ny + iy) * fine.nx + ix;
                    const std::size_t ccell =
                        (static_cast<std::size_t>(ct) * coarse_ny + cy) * coarse_nx + cx;
                    for (int c = 0; c < family.comps; ++c) {
                        const double val = fine.values[fcell * family.comps + c];
                        const double plus = std::max(val, 0.0);
                        const double minus = std::max(-val, 0.0);
                        if (plus >= k) {
                            conc.pos[ki][ccell * family.comps + c] += plus * measure;
                        }
                        if (minus >= k) {
                            conc.neg[ki][ccell * family.comps + c] += minus * measure;
                        }
                    }
                }
            }
        }
    }

    conc.extrap_pos.assign(cc, 0.0);
    conc.extrap_neg.assign(cc, 0.0);
    std::vector<double> ladder(k_ladder.size());
    for (std::size_t j = 0; j < cc; ++j) {
        for (std::size_t ki = 0; ki < k_ladder.size(); ++ki) {
            ladder[ki] = conc.pos[ki][j];
        }
        conc.extrap_pos[j] = extrapolate_ladder(ladder);
        for (std::size_t ki = 0; ki < k_ladder.size(); ++ki) {
            ladder[ki] = conc.neg[ki][j];
        }
        conc.extrap_neg[j] = extrapolate_ladder(ladder);
    }
    return conc;
}

std::vector<ConcentrationField> time_slices(const ConcentrationField& conc) {
    std::vector<ConcentrationField> out;
    const std::size_t space_cells = static_cast<std::size_t>(conc.nx) * conc.ny;
    for (int t = 0; t < conc.nt; ++t) {
        ConcentrationField slab;
        slab.quantity = conc.quantity;
        slab.comps = conc.comps;
        slab.k_ladder = conc.k_ladder;
        slab.nt = 1;
        slab.nx = conc.nx;
        slab.ny = conc.ny;
        const std::size_t offset = static_cast<std::size_t>(t) * space_cells * conc.comps;
        const std::size_t len = space_cells * conc.comps;
        for (std::size_t ki = 0; ki < conc.k_ladder.size(); ++ki) {
            slab.pos.emplace_back(conc.pos[ki].begin() + offset, conc.pos[ki].begin() + offset + len);
            slab.neg.emplace_back(conc.neg[ki].begin() + offset, conc.neg[ki].begin() + offset + len);
        }
        slab.extrap_pos.assign(conc.extrap_pos.begin() + offset, conc.extrap_pos.begin() + offset + len);
        slab.extrap_neg.assign(conc.extrap_neg.begin() + offset, conc.extrap_neg.begin() + offset + len);
        out.push_back(std::move(slab));
    }
    return out;
}

QuantityFamily family_from_trajectories(const System& system,
                                        const std::vector<Trajectory>& runs,
                                        TrackedQuantity quantity, int alpha) {
    if (runs.empty()) {
        throw ConfigError("family_from_trajectories: empty run family");
    }
    QuantityFamily family;
    switch (quantity) {
    case TrackedQuantity::Eta:
        family.name = "eta";
        family.comps = 1;
        break;
    case TrackedQuantity::Avec:
        family.name = "A";
        family.comps = runs.front().snapshots.front().n;
        break;
    case TrackedQuantity::Flux:
        family.name = "F" + std::to_string(alpha);
        family.comps = runs.front().snapshots.front().n;
        break;
    }
    for (const Trajectory& traj : runs) {
        SampledLevel level;
        const TorusGrid& grid = traj.grid;
        level.nt = static_cast<int>(traj.snapshots.size()) - 1; // last snapshot carries no slab
        level.nx = grid.N;
        level.ny = grid.d == 2 ? grid.N : 1;
        level.cell_measure = grid.cell_volume();
        level.values.resize(static_cast<std::size_t>(level.nt) * level.nx * level.ny * family.comps);
        for (int it = 0; it < level.nt; ++it) {
            const ConservedField& snap = traj.snapshots[it];
            level.slab_weights.push_back(traj.snapshots[it + 1].t - snap.t);
            for (std::size_t cell = 0; cell < grid.cells(); ++cell) {
                const Vec u = snap.state(cell);
                const std::size_t base =
                    (static_cast<std::size_t>(it) * grid.cells() + cell) * family.comps;
                if (quantity == TrackedQuantity::Eta) {
                    level.values[base] = system.eta(u);
                } else {
                    const Vec val = quantity == TrackedQuantity::Avec ? system.A(u)
                                                                      : system.F(alpha, u);
                    for (int c = 0; c < family.comps; ++c) {
                        level.values[base + c] = val(c);
                    }
                }
            }
        }
        family.levels.push_back(std::move(level));
    }
    return family;
}

// ---------------------------------------------------------------------------

double hat_kernel(double r, double eps) {
    if (r <= eps) {
        return 1.0;
    }
    if (r >= 2.0 * eps) {
        return 0.0;
    }
    return 2.0 - r / eps;
}

RnResult radon_nikodym(const std::vector<double>& m_g, int comps,
                       const std::vector<double>& m_f, int nx, int ny,
                       const std::vector<double>& eps_ladder, double mask_floor) {
    const std::size_t cells = static_cast<std::size_t>(nx) * ny;
    if (m_f.size() != cells || m_g.size() != cells * comps) {
        throw GridError("radon_nikodym: mass fields do not match the grid");
    }
    if (eps_ladder.empty()) {
        throw ConfigError("radon_nikodym: empty epsilon ladder");
    }
    RnResult out;
    out.comps = comps;
    out.eps_ladder = eps_ladder;
    out.density.assign(eps_ladder.size(), std::vector<double>(cells * comps, 0.0));
    out.masked.assign(cells, 0);
    out.estimate.assign(cells * comps, 0.0);

    const double hx = 1.0 / nx;
    const double hy = 1.0 / std::max(ny, 1);
    const auto torus_dist = [](double a, double b) {
        const double d = std::abs(a - b);
        return std::min(d, 1.0 - d);
    };

    // smallest epsilon decides the mask and the estimate
    std::size_t smallest = 0;
    for (std::size_t e = 1; e < eps_ladder.size(); ++e) {
        if (eps_ladder[e] < eps_ladder[smallest]) {
            smallest = e;
        }
    }

    for (std::size_t e = 0; e < eps_ladder.size(); ++e) {
        const double eps = eps_ladder[e];
        for (std::size_t i = 0; i < cells; ++i) {
            const double xi = (static_cast<double>(i % nx) + 0.5) * hx;
            const double yi = ny > 1 ? (static_cast<double>(i / nx) + 0.5) * hy : 0.0;
            double den = 0.0;
            Vec num = Vec::Zero(comps);
            for (std::size_t j = 0; j < cells; ++j) {
                const double xj = (static_cast<double>(j % nx) + 0.5) * hx;
                const double yj = ny > 1 ? (static_cast<double>(j / nx) + 0.5) * hy : 0.0;
                const double dx = torus_dist(xi, xj);
                const double dy = ny > 1 ? torus_dist(yi, yj) : 0.0;
                const double w = hat_kernel(std::sqrt(dx * dx + dy * dy), eps);
                if (w == 0.0) {
                    continue;
                }
                den += w * m_f[j];
                for (int c = 0; c < comps; ++c) {
                    num(c) += w * m_g[j * comps + c];
                }
            }
            if (den < mask_floor) {
                if (e == smallest) {
                    out.masked[i] = 1;
                }
                continue;
            }
            for (int c = 0; c < comps; ++c) {
                out.density[e][i * comps + c] = num(c) / den;
            }
        }
    }

    bool any = false;
    for (std::size_t i = 0; i < cells; ++i) {
        if (!out.masked[i]) {
            any = true;
            for (int c = 0; c < comps; ++c) {
                out.estimate[i * comps + c] = out.density[smallest][i * comps + c];
            }
        }
    }
    if (!any) {
        throw MaskedAllError("radon_nikodym: reference mass vanishes everywhere");
    }
    return out;
}

DominationReport check_domination(const std::vector<double>& m_g_abs,
                                  const std::vector<double>& m_f, double C) {
    if (m_g_abs.size() != m_f.size()) {
        throw GridError("check_domination: fields on different grids");
    }
    DominationReport rep;
    rep.pass = true;
    for (std::size_t i = 0; i < m_f.size(); ++i) {
        const double excess = m_g_abs[i] - C * m_f[i];
        rep.max_violation = std::max(rep.max_violation, excess);
        if (m_f[i] > 0.0) {
            rep.worst_ratio = std::max(rep.worst_ratio, m_g_abs[i] / m_f[i]);
        } else if (m_g_abs[i] > 1e-12) {
            rep.worst_ratio = std::numeric_limits<double>::infinity();
        }
        if (excess > 1e-12) {
            rep.pass = false;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------

std::vector<double> RecessionProbe::default_s_grid() {
    std::vector<double> s;
    for (int i = 0; i <= 8; ++i) {
        s.push_back(std::pow(10.0, 1.0 + 0.375 * i)); // 10 .. 1e4
    }
    return s;
}

RecessionResult recession(const System& system, RecessionQuantity quantity, int alpha,
                          const RecessionProbe& probe, const Vec* U) {
    const bool relative = quantity == RecessionQuantity::EtaRel || quantity == RecessionQuantity::FluxRel;
    if (relative && U == nullptr) {
        throw ConfigError("recession: relative quantities need a reference state U");
    }
    const std::vector<double> s_grid =
        probe.s_grid.empty() ? RecessionProbe::default_s_grid() : probe.s_grid;
    const Vec& exps = system.scaling_exponents();
    const int n = system.state_dim();

    const auto ray_state = [&](double s) {
        Vec u(n);
        for (int i = 0; i < n; ++i) {
            u(i) = std::pow(s, exps(i)) * probe.beta(i);
        }
        return u;
    };

    RecessionResult out;
    Vec last, prev;
    Vec lastA, prevA; // |.|-free componentwise A(u_s)/eta for the identities
    bool have_prev = false;
    for (double s : s_grid) {
        const Vec u = ray_state(s);
        if (!system.in_closure(u)) {
            continue;
        }
        const double eta = system.eta(u);
        if (!std::isfinite(eta)) {
            out.truncated = true;
            break;
        }
        if (eta < 1e-300) {
            continue;
        }
        Vec ratio;
        switch (quantity) {
        case RecessionQuantity::A:
            ratio = system.A(u) / eta;
            break;
        case RecessionQuantity::Flux:
            ratio = system.F(alpha, u) / eta;
            break;
        case RecessionQuantity::EtaRel: {
            ratio = Vec::Constant(1, relative_entropy(system, u, *U) / eta);
            break;
        }
        case RecessionQuantity::FluxRel:
            ratio = relative_flux(system, alpha, u, *U) / eta;
            break;
        }
        if (!ratio.allFinite()) {
            out.truncated = true;
            break;
        }
        prev = last;
        last = ratio;
        prevA = lastA;
        lastA = system.A(u) / eta;
        have_prev = out.points_used > 0;
        ++out.points_used;
    }
    if (out.points_used == 0) {
        throw DomainError("recession: no usable points along the probe ray");
    }
    out.value = last;
    out.cauchy = have_prev ? (last - prev).lpNorm<Eigen::Infinity>()
                           : std::numeric_limits<double>::infinity();

    if (relative) {
        const Vec g = system.G(*U);
        if (quantity == RecessionQuantity::EtaRel) {
            out.identity_value = Vec::Constant(1, 1.0 - g.dot(lastA));
            out.identity_cauchy =
                have_prev ? std::abs(g.dot(lastA - prevA)) : std::numeric_limits<double>::infinity();
        } else {
            const Mat dF = system.grad_F(alpha, *U);
            const Mat dA = system.grad_A(*U);
            const Vec corr_last = dF * lu_solve(dA, lastA);
            const RecessionResult plain = recession(system, RecessionQuantity::Flux, alpha, probe);
            out.identity_value = plain.value - corr_last;
            out.identity_cauchy = plain.cauchy;
            if (have_prev) {
                const Vec corr_prev = dF * lu_solve(dA, prevA);
                out.identity_cauchy = std::max(out.identity_cauchy,
                                               (corr_last - corr_prev).lpNorm<Eigen::Infinity>());
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

ConcentrationRelationsReport concentration_relations(
    const System& system, const std::vector<double>& m_eta, const std::vector<double>& m_A,
    const std::vector<std::vector<double>>& m_F_per_alpha, const std::vector<Vec>& U_cells,
    double C, double tol_positive, double tol_dominated) {
    const std::size_t cells = m_eta.size();
    const int n = system.state_dim();
    if (m_A.size() != cells * n || U_cells.size() != cells) {
        throw GridError("concentration_relations: fields on different grids");
    }
    ConcentrationRelationsReport rep;
    rep.C = C;
    rep.pass_positive = true;
    rep.pass_dominated = true;
    rep.worst_margin = std::numeric_limits<double>::infinity();
    rep.worst_excess = -std::numeric_limits<double>::infinity();

    for (std::size_t i = 0; i < cells; ++i) {
        const Vec& U = U_cells[i];
        const Vec g = system.G(U);
        const Eigen::Map<const Vec> ma(m_A.data() + i * n, n);
        const double rel_mass = m_eta[i] - ma.dot(g);
        rep.worst_margin = std::min(rep.worst_margin, rel_mass);
        if (rel_mass < -tol_positive) {
            rep.pass_positive = false;
        }
        const Mat dA = system.grad_A(U);
        const Vec y = lu_solve(dA, ma);
        for (std::size_t a = 0; a < m_F_per_alpha.size(); ++a) {
            const Eigen::Map<const Vec> mf(m_F_per_alpha[a].data() + i * n, n);
            const Vec rel_flux = mf - system.grad_F(static_cast<int>(a), U) * y;
            const double excess = rel_flux.lpNorm<Eigen::Infinity>() - C * rel_mass;
            rep.worst_excess = std::max(rep.worst_excess, excess);
            if (excess > tol_dominated) {
                rep.pass_dominated = false;
            }
        }
    }
    return rep;
}

} // namespace entroflux
