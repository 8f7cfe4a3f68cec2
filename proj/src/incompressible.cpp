#include <cmath>

#include "entroflux/errors.hpp"
#include "systems_impl.hpp"

namespace entroflux::detail {

namespace {

// The four incompressible examples of the extended framework, all on the 2D
// torus. Their Lagrange multiplier L is perpendicular to Y; the relaxed
// companion identity reads G . grad F_alpha = grad q_alpha + Lbar_alpha.
// None of them has a finite-volume solver: sampled fields come from the
// constraint sampler and the spectral projection.

DomainBox velocity_box(int n) {
    Vec lo = Vec::Constant(n, -2.0);
    Vec hi = Vec::Constant(n, 2.0);
    return {lo, hi};
}

DomainBox density_box(int n) {
    DomainBox b = velocity_box(n);
    b.lo(0) = 0.5;
    b.hi(0) = 2.0;
    return b;
}

Constraint::DesignatedField direct_field(std::string name, int c0) {
    Constraint::DesignatedField f;
    f.name = std::move(name);
    f.extract = [c0](const Vec& u) -> std::array<double, 2> { return {u(c0), u(c0 + 1)}; };
    f.inject = [c0](Vec& u, const std::array<double, 2>& vals) {
        u(c0) = vals[0];
        u(c0 + 1) = vals[1];
    };
    return f;
}

// ---------------------------------------------------------------------------

class IncEulerSystem final : public System {
  public:
    IncEulerSystem() : System("inc-euler", 2, 2, Vec::Ones(2), velocity_box(2)) {
        std::vector<Constraint::DesignatedField> fields{direct_field("v", 0)};
        auto lbar = [](int alpha, const Vec& u) {
            Vec out = Vec::Zero(2);
            out(alpha) = 0.5 * u.squaredNorm();
            return out;
        };
        constraint_ = std::make_unique<Constraint>("L = grad p on the velocity components",
                                                   std::move(fields), lbar);
    }

    bool in_closure(const Vec&) const override { return true; }
    double boundary_distance(const Vec&) const override {
        return std::numeric_limits<double>::infinity();
    }

  protected:
    Vec do_A(const Vec& u) const override { return u; }

    Vec do_F(int alpha, const Vec& u) const override { return u(alpha) * u; }

    double do_eta(const Vec& u) const override { return 0.5 * u.squaredNorm(); }

    double do_q(int alpha, const Vec& u) const override {
        return 0.5 * u.squaredNorm() * u(alpha);
    }

    Vec do_G(const Vec& u) const override { return u; }

    Mat do_grad_A(const Vec&) const override { return Mat::Identity(2, 2); }

    Mat do_grad_F(int alpha, const Vec& u) const override {
        Mat m = u(alpha) * Mat::Identity(2, 2);
        m.col(alpha) += u;
        return m;
    }

    Vec do_grad_eta(const Vec& u) const override { return u; }

    Vec do_grad_q(int alpha, const Vec& u) const override {
        Vec out = u(alpha) * u;
        out(alpha) += 0.5 * u.squaredNorm();
        return out;
    }

    Mat do_grad_G(const Vec&) const override { return Mat::Identity(2, 2); }

    Mat do_hess_eta(const Vec&) const override { return Mat::Identity(2, 2); }

    std::vector<Mat> do_hess_A(const Vec&) const override {
        return std::vector<Mat>(2, Mat::Zero(2, 2));
    }

    Vec do_invert_A(const Vec& v, const VacuumPolicy&, long*) const override { return v; }
};

// ---------------------------------------------------------------------------

class IncMhdSystem final : public System {
  public:
    IncMhdSystem() : System("inc-mhd", 4, 2, Vec::Ones(4), velocity_box(4)) {
        std::vector<Constraint::DesignatedField> fields{direct_field("v", 0),
                                                        direct_field("b", 2)};
        auto lbar = [](int alpha, const Vec& u) {
            const Vec v = u.head(2);
            const Vec b = u.tail(2);
            Vec out = Vec::Zero(4);
            out(alpha) = 0.5 * u.squaredNorm();
            out(2 + alpha) = -v.dot(b);
            return out;
        };
        constraint_ = std::make_unique<Constraint>(
            "L = (grad(p + |b|^2/2), 0) on the velocity components", std::move(fields), lbar);
    }

    bool in_closure(const Vec&) const override { return true; }
    double boundary_distance(const Vec&) const override {
        return std::numeric_limits<double>::infinity();
    }

  protected:
    Vec do_A(const Vec& u) const override { return u; }

    Vec do_F(int alpha, const Vec& u) const override {
        const Vec v = u.head(2);
        const Vec b = u.tail(2);
        Vec out(4);
        out.head(2) = v(alpha) * v - b(alpha) * b;
        out.tail(2) = v(alpha) * b - b(alpha) * v;
        return out;
    }

    double do_eta(const Vec& u) const override { return 0.5 * u.squaredNorm(); }

    double do_q(int alpha, const Vec& u) const override {
        const Vec v = u.head(2);
        const Vec b = u.tail(2);
        return 0.5 * u.squaredNorm() * v(alpha) - v.dot(b) * b(alpha);
    }

    Vec do_G(const Vec& u) const override { return u; }

    Mat do_grad_A(const Vec&) const override { return Mat::Identity(4, 4); }

    Mat do_grad_F(int alpha, const Vec& u) const override {
        const Vec v = u.head(2);
        const Vec b = u.tail(2);
        Mat m = Mat::Zero(4, 4);
        for (int i = 0; i < 2; ++i) {
            for (int k = 0; k < 2; ++k) {
                m(i, k) = (k == alpha ? v(i) : 0.0) + (i == k ? v(alpha) : 0.0);
                m(i, 2 + k) = -((k == alpha ? b(i) : 0.0) + (i == k ? b(alpha) : 0.0));
                m(2 + i, k) = (k == alpha ? b(i) : 0.0) - (i == k ? b(alpha) : 0.0);
                m(2 + i, 2 + k) = (i == k ? v(alpha) : 0.0) - (k == alpha ? v(i) : 0.0);
            }
        }
        return m;
    }

    Vec do_grad_eta(const Vec& u) const override { return u; }

    Vec do_grad_q(int alpha, const Vec& u) const override {
        const Vec v = u.head(2);
        const Vec b = u.tail(2);
        const double vdb = v.dot(b);
        Vec out(4);
        for (int k = 0; k < 2; ++k) {
            out(k) = v(k) * v(alpha) + (k == alpha ? 0.5 * u.squaredNorm() : 0.0) - b(k) * b(alpha);
            out(2 + k) = b(k) * v(alpha) - v(k) * b(alpha) - (k == alpha ? vdb : 0.0);
        }
        return out;
    }

    Mat do_grad_G(const Vec&) const override { return Mat::Identity(4, 4); }

    Mat do_hess_eta(const Vec&) const override { return Mat::Identity(4, 4); }

    std::vector<Mat> do_hess_A(const Vec&) const override {
        return std::vector<Mat>(4, Mat::Zero(4, 4));
    }

    Vec do_invert_A(const Vec& v, const VacuumPolicy&, long*) const override { return v; }
};

// ---------------------------------------------------------------------------

class NonhomIncEulerSystem final : public System {
  public:
    NonhomIncEulerSystem()
        : System("nonhom-inc-euler", 3, 2, Vec::Ones(3), density_box(3)) {
        std::vector<Constraint::DesignatedField> fields(1);
        fields[0].name = "v";
        fields[0].extract = [](const Vec& u) -> std::array<double, 2> {
            const double sa = std::sqrt(u(0));
            return {u(1) / sa, u(2) / sa};
        };
        fields[0].inject = [](Vec& u, const std::array<double, 2>& v) {
            const double sa = std::sqrt(u(0));
            u(1) = sa * v[0];
            u(2) = sa * v[1];
        };
        auto lbar = [](int alpha, const Vec& u) {
            const double sa = std::sqrt(u(0));
            Vec out = Vec::Zero(3);
            out(0) = -0.25 * sa * u(1 + alpha);
            out(1 + alpha) = 0.5 * u(0) * sa;
            return out;
        };
        constraint_ = std::make_unique<Constraint>("L = (0, grad p)", std::move(fields), lbar);
    }

    bool in_closure(const Vec& u) const override { return u(0) >= 0.0; }
    double boundary_distance(const Vec& u) const override { return u(0); }

  protected:
    Vec do_A(const Vec& u) const override {
        Vec out(3);
        out(0) = u(0);
        out.tail(2) = std::sqrt(u(0)) * u.tail(2);
        return out;
    }

    Vec do_F(int alpha, const Vec& u) const override {
        const Vec w = u.tail(2);
        Vec out(3);
        out(0) = std::sqrt(u(0)) * w(alpha);
        out.tail(2) = w(alpha) * w;
        return out;
    }

    double do_eta(const Vec& u) const override {
        return 0.5 * (u(0) * u(0) + u.tail(2).squaredNorm());
    }

    double do_q(int alpha, const Vec& u) const override {
        return 0.5 * (u(0) * u(0) + u.tail(2).squaredNorm()) * u(1 + alpha) / std::sqrt(u(0));
    }

    Vec do_G(const Vec& u) const override {
        const double a = u(0);
        Vec out(3);
        out(0) = a - 0.5 * u.tail(2).squaredNorm() / a;
        out.tail(2) = u.tail(2) / std::sqrt(a);
        return out;
    }

    Mat do_grad_A(const Vec& u) const override {
        const double sa = std::sqrt(u(0));
        Mat m = Mat::Zero(3, 3);
        m(0, 0) = 1.0;
        for (int i = 0; i < 2; ++i) {
            m(1 + i, 0) = u(1 + i) / (2.0 * sa);
            m(1 + i, 1 + i) = sa;
        }
        return m;
    }

    Mat do_grad_F(int alpha, const Vec& u) const override {
        const double sa = std::sqrt(u(0));
        const Vec w = u.tail(2);
        Mat m = Mat::Zero(3, 3);
        m(0, 0) = w(alpha) / (2.0 * sa);
        m(0, 1 + alpha) = sa;
        for (int i = 0; i < 2; ++i) {
            for (int k = 0; k < 2; ++k) {
                m(1 + i, 1 + k) = (i == k ? w(alpha) : 0.0) + (k == alpha ? w(i) : 0.0);
            }
        }
        return m;
    }

    Vec do_grad_eta(const Vec& u) const override {
        Vec out(3);
        out(0) = u(0);
        out.tail(2) = u.tail(2);
        return out;
    }

    Vec do_grad_q(int alpha, const Vec& u) const override {
        const double a = u(0);
        const double sa = std::sqrt(a);
        const Vec w = u.tail(2);
        const double s = a * a + w.squaredNorm();
        Vec out(3);
        out(0) = u(1 + alpha) * (sa - 0.25 * s / (a * sa));
        for (int k = 0; k < 2; ++k) {
            out(1 + k) = (w(k) * w(alpha) + (k == alpha ? 0.5 * s : 0.0)) / sa;
        }
        return out;
    }

    Mat do_grad_G(const Vec& u) const override {
        const double a = u(0);
        const Vec w = u.tail(2);
        Mat m = Mat::Zero(3, 3);
        m(0, 0) = 1.0 + 0.5 * w.squaredNorm() / (a * a);
        for (int k = 0; k < 2; ++k) {
            m(0, 1 + k) = -w(k) / a;
            m(1 + k, 0) = -0.5 * w(k) / (a * std::sqrt(a));
            m(1 + k, 1 + k) = 1.0 / std::sqrt(a);
        }
        return m;
    }

    Mat do_hess_eta(const Vec&) const override { return Mat::Identity(3, 3); }

    std::vector<Mat> do_hess_A(const Vec& u) const override {
        const double a = u(0);
        std::vector<Mat> out(3, Mat::Zero(3, 3));
        for (int i = 0; i < 2; ++i) {
            Mat& m = out[1 + i];
            m(0, 0) = -0.25 * u(1 + i) / (a * std::sqrt(a));
            m(0, 1 + i) = 0.5 / std::sqrt(a);
            m(1 + i, 0) = m(0, 1 + i);
        }
        return out;
    }

    Vec do_invert_A(const Vec& v, const VacuumPolicy& policy, long* clamp_events) const override {
        double a = v(0);
        if (a < policy.rho_min) {
            if (policy.strict) {
                throw VacuumError("nonhom-inc-euler: conserved density below rho_min");
            }
            a = policy.rho_min;
            if (clamp_events != nullptr) {
                ++(*clamp_events);
            }
        }
        Vec u(3);
        u(0) = a;
        u.tail(2) = v.tail(2) / std::sqrt(a);
        return u;
    }
};

// ---------------------------------------------------------------------------

class NonhomIncMhdSystem final : public System {
  public:
    NonhomIncMhdSystem()
        : System("nonhom-inc-mhd", 5, 2, exponents(), density_box(5)) {
        std::vector<Constraint::DesignatedField> fields{direct_field("v", 1),
                                                        direct_field("b", 3)};
        auto lbar = [](int alpha, const Vec& u) {
            const Vec v = u.segment(1, 2);
            const Vec b = u.segment(3, 2);
            Vec out = Vec::Zero(5);
            out(1 + alpha) = 0.5 * (u(0) * u(0) + b.squaredNorm());
            out(3 + alpha) = -v.dot(b);
            return out;
        };
        constraint_ = std::make_unique<Constraint>(
            "L = (0, grad(p + |b|^2/2), 0) on the velocity components", std::move(fields), lbar);
    }

    bool in_closure(const Vec& u) const override { return u(0) >= 0.0; }
    double boundary_distance(const Vec& u) const override { return u(0); }

  protected:
    Vec do_A(const Vec& u) const override {
        Vec out(5);
        out(0) = u(0);
        out.segment(1, 2) = u(0) * u.segment(1, 2);
        out.segment(3, 2) = u.segment(3, 2);
        return out;
    }

    Vec do_F(int alpha, const Vec& u) const override {
        const double a = u(0);
        const Vec v = u.segment(1, 2);
        const Vec b = u.segment(3, 2);
        Vec out(5);
        out(0) = a * v(alpha);
        out.segment(1, 2) = a * v(alpha) * v - b(alpha) * b;
        out.segment(3, 2) = v(alpha) * b - b(alpha) * v;
        return out;
    }

    double do_eta(const Vec& u) const override {
        const double a = u(0);
        return 0.5 * (a * a + a * u.segment(1, 2).squaredNorm() + u.segment(3, 2).squaredNorm());
    }

    double do_q(int alpha, const Vec& u) const override {
        const double a = u(0);
        const Vec v = u.segment(1, 2);
        const Vec b = u.segment(3, 2);
        const double e = 0.5 * (a * a + a * v.squaredNorm() + b.squaredNorm());
        return e * v(alpha) - v.dot(b) * b(alpha);
    }

    Vec do_G(const Vec& u) const override {
        Vec out(5);
        out(0) = u(0) - 0.5 * u.segment(1, 2).squaredNorm();
        out.segment(1, 4) = u.segment(1, 4);
        return out;
    }

    Mat do_grad_A(const Vec& u) const override {
        Mat m = Mat::Identity(5, 5);
        for (int i = 0; i < 2; ++i) {
            m(1 + i, 0) = u(1 + i);
            m(1 + i, 1 + i) = u(0);
        }
        return m;
    }

    Mat do_grad_F(int alpha, const Vec& u) const override {
        const double a = u(0);
        const Vec v = u.segment(1, 2);
        const Vec b = u.segment(3, 2);
        Mat m = Mat::Zero(5, 5);
        m(0, 0) = v(alpha);
        m(0, 1 + alpha) = a;
        for (int i = 0; i < 2; ++i) {
            m(1 + i, 0) = v(alpha) * v(i);
            for (int k = 0; k < 2; ++k) {
                m(1 + i, 1 + k) = a * ((i == k ? v(alpha) : 0.0) + (k == alpha ? v(i) : 0.0));
                m(1 + i, 3 + k) = -((i == k ? b(alpha) : 0.0) + (k == alpha ? b(i) : 0.0));
                m(3 + i, 1 + k) = (k == alpha ? b(i) : 0.0) - (i == k ? b(alpha) : 0.0);
                m(3 + i, 3 + k) = (i == k ? v(alpha) : 0.0) - (k == alpha ? v(i) : 0.0);
            }
        }
        return m;
    }

    Vec do_grad_eta(const Vec& u) const override {
        const Vec v = u.segment(1, 2);
        Vec out(5);
        out(0) = u(0) + 0.5 * v.squaredNorm();
        out.segment(1, 2) = u(0) * v;
        out.segment(3, 2) = u.segment(3, 2);
        return out;
    }

    Vec do_grad_q(int alpha, const Vec& u) const override {
        const double a = u(0);
        const Vec v = u.segment(1, 2);
        const Vec b = u.segment(3, 2);
        const double e = 0.5 * (a * a + a * v.squaredNorm() + b.squaredNorm());
        const double vdb = v.dot(b);
        Vec out(5);
        out(0) = (a + 0.5 * v.squaredNorm()) * v(alpha);
        for (int k = 0; k < 2; ++k) {
            out(1 + k) = a * v(k) * v(alpha) + (k == alpha ? e : 0.0) - b(k) * b(alpha);
            out(3 + k) = b(k) * v(alpha) - v(k) * b(alpha) - (k == alpha ? vdb : 0.0);
        }
        return out;
    }

    Mat do_grad_G(const Vec& u) const override {
        Mat m = Mat::Identity(5, 5);
        m(0, 0) = 1.0;
        m(0, 1) = -u(1);
        m(0, 2) = -u(2);
        return m;
    }

    Mat do_hess_eta(const Vec& u) const override {
        Mat m = Mat::Identity(5, 5);
        m(0, 0) = 1.0;
        for (int i = 0; i < 2; ++i) {
            m(0, 1 + i) = u(1 + i);
            m(1 + i, 0) = u(1 + i);
            m(1 + i, 1 + i) = u(0);
        }
        return m;
    }

    std::vector<Mat> do_hess_A(const Vec&) const override {
        std::vector<Mat> out(5, Mat::Zero(5, 5));
        for (int i = 0; i < 2; ++i) {
            Mat& m = out[1 + i];
            m(0, 1 + i) = 1.0;
            m(1 + i, 0) = 1.0;
        }
        return out;
    }

    Vec do_invert_A(const Vec& v, const VacuumPolicy& policy, long* clamp_events) const override {
        double a = v(0);
        if (a < policy.rho_min) {
            if (policy.strict) {
                throw VacuumError("nonhom-inc-mhd: conserved density below rho_min");
            }
            a = policy.rho_min;
            if (clamp_events != nullptr) {
                ++(*clamp_events);
            }
        }
        Vec u(5);
        u(0) = a;
        u.segment(1, 2) = v.segment(1, 2) / a;
        u.segment(3, 2) = v.segment(3, 2);
        return u;
    }

  private:
    static Vec exponents() {
        Vec e = Vec::Ones(5);
        e(1) = 0.5;
        e(2) = 0.5;
        return e;
    }
};

} // namespace

std::unique_ptr<System> make_inc_euler(const SystemParams& params) {
    if (params.space_dim != 0 && params.space_dim != 2) {
        throw ConfigError("inc-euler: system is two-dimensional");
    }
    return std::make_unique<IncEulerSystem>();
}

std::unique_ptr<System> make_inc_mhd(const SystemParams& params) {
    if (params.space_dim != 0 && params.space_dim != 2) {
        throw ConfigError("inc-mhd: system is two-dimensional");
    }
    return std::make_unique<IncMhdSystem>();
}

std::unique_ptr<System> make_nonhom_inc_euler(const SystemParams& params) {
    if (params.space_dim != 0 && params.space_dim != 2) {
        throw ConfigError("nonhom-inc-euler: system is two-dimensional");
    }
    return std::make_unique<NonhomIncEulerSystem>();
}

std::unique_ptr<System> make_nonhom_inc_mhd(const SystemParams& params) {
    if (params.space_dim != 0 && params.space_dim != 2) {
        throw ConfigError("nonhom-inc-mhd: system is two-dimensional");
    }
    return std::make_unique<NonhomIncMhdSystem>();
}

} // namespace entroflux::detail
