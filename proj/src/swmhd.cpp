#include <cmath>

#include "entroflux/errors.hpp"
#include "systems_impl.hpp"

namespace entroflux::detail {

namespace {

// Shallow-water MHD in u = (h, sqrt(h) v, sqrt(h) b) on the 2D torus. The
// flux block for hb omits the transported term v Div(hb); the companion
// identity then holds only up to Lbar_alpha with
// Lbar_alpha . d_alpha u = -(v.b) Div(hb), which vanishes on the constraint
// set Div(hb) = 0. The system therefore carries a ConstraintSpec whose
// designated field is hb.
class SwMhdSystem final : public System {
  public:
    explicit SwMhdSystem(double g)
        : System("swmhd", 5, 2, Vec::Ones(5), box()), g_(g) {
        if (g <= 0.0) {
            throw ConfigError("swmhd: gravity constant must be positive");
        }
        std::vector<Constraint::DesignatedField> fields(1);
        fields[0].name = "hb";
        fields[0].extract = [](const Vec& u) -> std::array<double, 2> {
            const double sa = std::sqrt(u(0));
            return {sa * u(3), sa * u(4)};
        };
        fields[0].inject = [](Vec& u, const std::array<double, 2>& hb) {
            const double sa = std::sqrt(u(0));
            u(3) = hb[0] / sa;
            u(4) = hb[1] / sa;
        };
        auto lbar = [](int alpha, const Vec& u) {
            const double a = u(0);
            const double wz = u(1) * u(3) + u(2) * u(4);
            Vec out = Vec::Zero(5);
            out(0) = -wz * u(3 + alpha) / (2.0 * a * std::sqrt(a));
            out(3 + alpha) = -wz / std::sqrt(a);
            return out;
        };
        constraint_ = std::make_unique<Constraint>(
            "none (transported constraint Div(hb) = 0, no Lagrange multiplier)",
            std::move(fields), lbar);
    }

    bool in_closure(const Vec& u) const override { return u(0) >= 0.0; }
    double boundary_distance(const Vec& u) const override { return u(0); }

    bool solver_supported() const override { return true; }
    double wave_speed_bound(const Vec& u) const override {
        const double a = u(0);
        if (a <= 0.0) {
            return 0.0;
        }
        const double v2 = (u(1) * u(1) + u(2) * u(2)) / a;
        const double b2 = (u(3) * u(3) + u(4) * u(4)) / a;
        return std::sqrt(v2) + std::sqrt(g_ * a + b2);
    }

  protected:
    Vec do_A(const Vec& u) const override {
        const double sa = std::sqrt(u(0));
        Vec out(5);
        out(0) = u(0);
        out.segment(1, 4) = sa * u.segment(1, 4);
        return out;
    }

    Vec do_F(int alpha, const Vec& u) const override {
        const double a = u(0);
        const Vec w = u.segment(1, 2);
        const Vec z = u.segment(3, 2);
        Vec out(5);
        out(0) = std::sqrt(a) * w(alpha);
        out.segment(1, 2) = w(alpha) * w - z(alpha) * z;
        out(1 + alpha) += 0.5 * g_ * a * a;
        out.segment(3, 2) = w(alpha) * z - z(alpha) * w;
        return out;
    }

    double do_eta(const Vec& u) const override {
        return 0.5 * (u.segment(1, 4).squaredNorm() + g_ * u(0) * u(0));
    }

    double do_q(int alpha, const Vec& u) const override {
        const double a = u(0);
        const Vec w = u.segment(1, 2);
        const Vec z = u.segment(3, 2);
        const double kinetic = 0.5 * (w.squaredNorm() + z.squaredNorm());
        return ((kinetic + g_ * a * a) * w(alpha) - w.dot(z) * z(alpha)) / std::sqrt(a);
    }

    Vec do_G(const Vec& u) const override {
        const double a = u(0);
        Vec out(5);
        out(0) = g_ * a - 0.5 * u.segment(1, 4).squaredNorm() / a;
        out.segment(1, 4) = u.segment(1, 4) / std::sqrt(a);
        return out;
    }

    Mat do_grad_A(const Vec& u) const override {
        const double sa = std::sqrt(u(0));
        Mat m = Mat::Zero(5, 5);
        m(0, 0) = 1.0;
        for (int i = 1; i < 5; ++i) {
            m(i, 0) = u(i) / (2.0 * sa);
            m(i, i) = sa;
        }
        return m;
    }

    Mat do_grad_F(int alpha, const Vec& u) const override {
        const double a = u(0);
        const double sa = std::sqrt(a);
        const Vec w = u.segment(1, 2);
        const Vec z = u.segment(3, 2);
        Mat m = Mat::Zero(5, 5);
        m(0, 0) = w(alpha) / (2.0 * sa);
        m(0, 1 + alpha) = sa;
        for (int i = 0; i < 2; ++i) {
            // momentum block: w_a w_i - z_a z_i + g a^2/2 delta
            if (i == alpha) {
                m(1 + i, 0) = g_ * a;
            }
            for (int k = 0; k < 2; ++k) {
                m(1 + i, 1 + k) = (i == k ? w(alpha) : 0.0) + (k == alpha ? w(i) : 0.0);
                m(1 + i, 3 + k) = -((i == k ? z(alpha) : 0.0) + (k == alpha ? z(i) : 0.0));
            }
            // induction block: w_a z_i - z_a w_i
            for (int k = 0; k < 2; ++k) {
                m(3 + i, 1 + k) = (k == alpha ? z(i) : 0.0) - (i == k ? z(alpha) : 0.0);
                m(3 + i, 3 + k) = (i == k ? w(alpha) : 0.0) - (k == alpha ? w(i) : 0.0);
            }
        }
        return m;
    }

    Vec do_grad_eta(const Vec& u) const override {
        Vec out(5);
        out(0) = g_ * u(0);
        out.segment(1, 4) = u.segment(1, 4);
        return out;
    }

    Vec do_grad_q(int alpha, const Vec& u) const override {
        const double a = u(0);
        const double sa = std::sqrt(a);
        const Vec w = u.segment(1, 2);
        const Vec z = u.segment(3, 2);
        const double e = 0.5 * (w.squaredNorm() + z.squaredNorm()) + g_ * a * a;
        const double wz = w.dot(z);
        Vec out(5);
        out(0) = 2.0 * g_ * sa * w(alpha) - 0.5 * (e * w(alpha) - wz * z(alpha)) / (a * sa);
        for (int k = 0; k < 2; ++k) {
            out(1 + k) = (w(k) * w(alpha) + (k == alpha ? e : 0.0) - z(k) * z(alpha)) / sa;
            out(3 + k) = (z(k) * w(alpha) - w(k) * z(alpha) - (k == alpha ? wz : 0.0)) / sa;
        }
        return out;
    }

    Mat do_grad_G(const Vec& u) const override {
        const double a = u(0);
        Mat m = Mat::Zero(5, 5);
        m(0, 0) = g_ + 0.5 * u.segment(1, 4).squaredNorm() / (a * a);
        for (int k = 1; k < 5; ++k) {
            m(0, k) = -u(k) / a;
            m(k, 0) = -0.5 * u(k) / (a * std::sqrt(a));
            m(k, k) = 1.0 / std::sqrt(a);
        }
        return m;
    }

    Mat do_hess_eta(const Vec&) const override {
        Mat m = Mat::Identity(5, 5);
        m(0, 0) = g_;
        return m;
    }

    std::vector<Mat> do_hess_A(const Vec& u) const override {
        const double a = u(0);
        std::vector<Mat> out(5, Mat::Zero(5, 5));
        for (int i = 1; i < 5; ++i) {
            Mat& m = out[i];
            m(0, 0) = -0.25 * u(i) / (a * std::sqrt(a));
            m(0, i) = 0.5 / std::sqrt(a);
            m(i, 0) = m(0, i);
        }
        return out;
    }

    Vec do_invert_A(const Vec& v, const VacuumPolicy& policy, long* clamp_events) const override {
        double a = v(0);
        if (a < policy.rho_min) {
            if (policy.strict) {
                throw VacuumError("swmhd: conserved thickness below rho_min");
            }
            a = policy.rho_min;
            if (clamp_events != nullptr) {
                ++(*clamp_events);
            }
        }
        Vec u(5);
        u(0) = a;
        u.segment(1, 4) = v.segment(1, 4) / std::sqrt(a);
        return u;
    }

  private:
    static DomainBox box() {
        Vec lo(5), hi(5);
        lo(0) = 0.5;
        hi(0) = 2.0;
        for (int i = 1; i < 5; ++i) {
            lo(i) = -2.0;
            hi(i) = 2.0;
        }
        return {lo, hi};
    }

    double g_;
};

} // namespace

std::unique_ptr<System> make_swmhd(const SystemParams& params) {
    if (params.space_dim != 0 && params.space_dim != 2) {
        throw ConfigError("swmhd: system is two-dimensional");
    }
    return std::make_unique<SwMhdSystem>(params.g);
}

} // namespace entroflux::detail
