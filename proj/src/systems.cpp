#include "entroflux/systems.hpp"

#include <cmath>

#include "entroflux/errors.hpp"

namespace entroflux {

namespace {

void check_state_size(const Vec& u, int n) {
    if (u.size() != n) {
        throw DomainError("state has wrong dimension");
    }
}

} // namespace

void System::check_closure(const Vec& u) const {
    check_state_size(u, n_);
    if (!in_closure(u)) {
        throw DomainError(name_ + ": state outside the closure of X");
    }
}

void System::check_interior(const Vec& u, bool with_margin) const {
    check_state_size(u, n_);
    const double margin = with_margin ? margin_ : 0.0;
    if (!in_interior(u, margin)) {
        throw DomainError(name_ + ": state not interior to X" +
                          (with_margin ? " (margin violated)" : ""));
    }
}

void System::check_alpha(int alpha) const {
    if (alpha < 0 || alpha >= d_) {
        throw DomainError(name_ + ": flux index out of range");
    }
}

Vec System::A(const Vec& u) const {
    check_closure(u);
    return do_A(u);
}

Vec System::F(int alpha, const Vec& u) const {
    check_alpha(alpha);
    check_closure(u);
    return do_F(alpha, u);
}

double System::eta(const Vec& u) const {
    check_closure(u);
    return do_eta(u);
}

double System::q(int alpha, const Vec& u) const {
    check_alpha(alpha);
    check_interior(u, false);
    return do_q(alpha, u);
}

Vec System::G(const Vec& u) const {
    check_interior(u, false);
    return do_G(u);
}

Mat System::grad_A(const Vec& u) const {
    check_interior(u, true);
    return do_grad_A(u);
}

Mat System::grad_F(int alpha, const Vec& u) const {
    check_alpha(alpha);
    check_interior(u, true);
    return do_grad_F(alpha, u);
}

Vec System::grad_eta(const Vec& u) const {
    check_interior(u, true);
    return do_grad_eta(u);
}

Vec System::grad_q(int alpha, const Vec& u) const {
    check_alpha(alpha);
    check_interior(u, true);
    return do_grad_q(alpha, u);
}

Mat System::grad_G(const Vec& u) const {
    check_interior(u, true);
    return do_grad_G(u);
}

Mat System::hess_eta(const Vec& u) const {
    check_interior(u, true);
    return do_hess_eta(u);
}

std::vector<Mat> System::hess_A(const Vec& u) const {
    check_interior(u, true);
    return do_hess_A(u);
}

Mat System::hessian_form(const Vec& u) const {
    check_interior(u, true);
    Mat m = do_hess_eta(u);
    const Vec g = do_G(u);
    const std::vector<Mat> ha = do_hess_A(u);
    for (int k = 0; k < state_dim(); ++k) {
        m -= g(k) * ha[k];
    }
    return 0.5 * (m + m.transpose());
}

Vec System::invert_A(const Vec& v, const VacuumPolicy& policy, long* clamp_events) const {
    check_state_size(v, n_);
    return do_invert_A(v, policy, clamp_events);
}

double System::wave_speed_bound(const Vec&) const {
    throw ConfigError(name() + ": no wave-speed bound (system has no solver)");
}

void Constraint::project(StateField2D& field, const std::vector<int>* which) const {
    std::vector<int> all;
    if (which == nullptr) {
        for (int j = 0; j < num_designated(); ++j) {
            all.push_back(j);
        }
        which = &all;
    }
    for (int j : *which) {
        const auto& df = fields_.at(j);
        ScalarField2D fx(field.cells()), fy(field.cells());
        for (std::size_t i = 0; i < field.cells(); ++i) {
            const auto vals = df.extract(field.state(i));
            fx[i] = vals[0];
            fy[i] = vals[1];
        }
        project_divergence_free(field.N, fx, fy);
        for (std::size_t i = 0; i < field.cells(); ++i) {
            Vec u = field.state(i);
            df.inject(u, {fx[i], fy[i]});
            field.set_state(i, u);
        }
    }
}

double Constraint::max_divergence(const StateField2D& field) const {
    double worst = 0.0;
    for (const auto& df : fields_) {
        ScalarField2D fx(field.cells()), fy(field.cells());
        for (std::size_t i = 0; i < field.cells(); ++i) {
            const auto vals = df.extract(field.state(i));
            fx[i] = vals[0];
            fy[i] = vals[1];
        }
        const ScalarField2D div = spectral_divergence(field.N, fx, fy);
        for (double x : div) {
            worst = std::max(worst, std::abs(x));
        }
    }
    return worst;
}

StateField2D sample_smooth_state_field(const System& system, int N, Rng& rng, int max_mode) {
    const int n = system.state_dim();
    const DomainBox& box = system.default_box();
    StateField2D field(N, n);

    // Band-limited trig sums per component, rescaled into the middle 80% of
    // the box so derived quantities stay away from the boundary of X.
    for (int c = 0; c < n; ++c) {
        struct Mode {
            int kx, ky;
            double amp, phase_x, phase_y;
        };
        std::vector<Mode> modes;
        for (int kx = 0; kx <= max_mode; ++kx) {
            for (int ky = 0; ky <= max_mode; ++ky) {
                if (kx == 0 && ky == 0) {
                    continue;
                }
                modes.push_back({kx, ky, rng.normal() / (1.0 + kx + ky),
                                 rng.uniform(0.0, 2.0 * M_PI), rng.uniform(0.0, 2.0 * M_PI)});
            }
        }
        std::vector<double> raw(field.cells());
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (int iy = 0; iy < N; ++iy) {
            for (int ix = 0; ix < N; ++ix) {
                const double x = (ix + 0.5) / N;
                const double y = (iy + 0.5) / N;
                double s = 0.0;
                for (const auto& m : modes) {
                    s += m.amp * std::sin(2.0 * M_PI * m.kx * x + m.phase_x) *
                         std::sin(2.0 * M_PI * m.ky * y + m.phase_y);
                }
                raw[static_cast<std::size_t>(iy) * N + ix] = s;
                lo = std::min(lo, s);
                hi = std::max(hi, s);
            }
        }
        const double mid = 0.5 * (box.lo(c) + box.hi(c));
        const double half = 0.4 * (box.hi(c) - box.lo(c));
        const double span = std::max(hi - lo, 1e-30);
        for (std::size_t i = 0; i < field.cells(); ++i) {
            const double t = 2.0 * (raw[i] - lo) / span - 1.0;
            field.data[i * n + c] = mid + half * t;
        }
    }
    return field;
}

} // namespace entroflux
