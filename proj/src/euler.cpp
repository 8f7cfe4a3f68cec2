#include <cmath>

#include "entroflux/errors.hpp"
#include "systems_impl.hpp"

namespace entroflux::detail {

namespace {

// Isentropic compressible Euler in the variables u = (rho, sqrt(rho) v) with
// the gamma-law pressure p = rho^gamma. The entropy carries the constant
// offset that makes min P + c0 = 0, so eta >= 0 on the whole closure; the
// entropy flux q uses the un-offset potential (the offset would break the
// companion identity, and it cancels from every relative quantity).
class EulerSystem final : public System {
  public:
    EulerSystem(double gamma, int d)
        : System("euler", 1 + d, d, exponents(d), box(d)), gamma_(gamma) {
        if (gamma <= 1.0) {
            throw ConfigError("euler: gamma must exceed 1");
        }
        const double rho_star = std::pow(gamma_, -1.0 / (gamma_ - 1.0));
        offset_ = -potential(rho_star);
    }

    bool in_closure(const Vec& u) const override { return u(0) >= 0.0; }
    double boundary_distance(const Vec& u) const override { return u(0); }

    bool solver_supported() const override { return true; }
    double wave_speed_bound(const Vec& u) const override {
        const double a = u(0);
        if (a <= 0.0) {
            return 0.0;
        }
        const double speed = std::sqrt(u.tail(space_dim()).squaredNorm() / a);
        return speed + std::sqrt(gamma_ * std::pow(a, gamma_ - 1.0));
    }

    double pressure(double rho) const { return std::pow(rho, gamma_); }
    double pressure_d(double rho) const { return gamma_ * std::pow(rho, gamma_ - 1.0); }
    double potential(double rho) const {
        return (std::pow(rho, gamma_) - rho) / (gamma_ - 1.0);
    }
    double potential_d(double rho) const {
        return (gamma_ * std::pow(rho, gamma_ - 1.0) - 1.0) / (gamma_ - 1.0);
    }
    double potential_dd(double rho) const {
        return gamma_ * std::pow(rho, gamma_ - 2.0);
    }
    double entropy_offset() const { return offset_; }

  protected:
    Vec do_A(const Vec& u) const override {
        const int d = space_dim();
        Vec out(1 + d);
        out(0) = u(0);
        out.tail(d) = std::sqrt(u(0)) * u.tail(d);
        return out;
    }

    Vec do_F(int alpha, const Vec& u) const override {
        const int d = space_dim();
        const double a = u(0);
        const Vec w = u.tail(d);
        Vec out(1 + d);
        out(0) = std::sqrt(a) * w(alpha);
        out.tail(d) = w(alpha) * w;
        out(1 + alpha) += pressure(a);
        return out;
    }

    double do_eta(const Vec& u) const override {
        return 0.5 * u.tail(space_dim()).squaredNorm() + potential(u(0)) + offset_;
    }

    double do_q(int alpha, const Vec& u) const override {
        const double a = u(0);
        const Vec w = u.tail(space_dim());
        return (0.5 * w.squaredNorm() + potential(a) + pressure(a)) * w(alpha) / std::sqrt(a);
    }

    Vec do_G(const Vec& u) const override {
        const int d = space_dim();
        const double a = u(0);
        const Vec w = u.tail(d);
        Vec out(1 + d);
        out(0) = potential_d(a) - 0.5 * w.squaredNorm() / a;
        out.tail(d) = w / std::sqrt(a);
        return out;
    }

    Mat do_grad_A(const Vec& u) const override {
        const int d = space_dim();
        const double sa = std::sqrt(u(0));
        Mat m = Mat::Zero(1 + d, 1 + d);
        m(0, 0) = 1.0;
        for (int i = 0; i < d; ++i) {
            m(1 + i, 0) = u(1 + i) / (2.0 * sa);
            m(1 + i, 1 + i) = sa;
        }
        return m;
    }

    Mat do_grad_F(int alpha, const Vec& u) const override {
        const int d = space_dim();
        const double a = u(0);
        const double sa = std::sqrt(a);
        const Vec w = u.tail(d);
        Mat m = Mat::Zero(1 + d, 1 + d);
        m(0, 0) = w(alpha) / (2.0 * sa);
        m(0, 1 + alpha) = sa;
        for (int i = 0; i < d; ++i) {
            m(1 + i, 0) = (i == alpha) ? pressure_d(a) : 0.0;
            for (int k = 0; k < d; ++k) {
                m(1 + i, 1 + k) = (i == k ? w(alpha) : 0.0) + (k == alpha ? w(i) : 0.0);
            }
        }
        return m;
    }

    Vec do_grad_eta(const Vec& u) const override {
        const int d = space_dim();
        Vec out(1 + d);
        out(0) = potential_d(u(0));
        out.tail(d) = u.tail(d);
        return out;
    }

    Vec do_grad_q(int alpha, const Vec& u) const override {
        const int d = space_dim();
        const double a = u(0);
        const double sa = std::sqrt(a);
        const Vec w = u.tail(d);
        const double e = 0.5 * w.squaredNorm() + potential(a) + pressure(a);
        Vec out(1 + d);
        out(0) = w(alpha) * ((potential_d(a) + pressure_d(a)) / sa - 0.5 * e / (a * sa));
        for (int k = 0; k < d; ++k) {
            out(1 + k) = (w(k) * w(alpha) + (k == alpha ? e : 0.0)) / sa;
        }
        return out;
    }

    Mat do_grad_G(const Vec& u) const override {
        const int d = space_dim();
        const double a = u(0);
        const Vec w = u.tail(d);
        Mat m = Mat::Zero(1 + d, 1 + d);
        m(0, 0) = potential_dd(a) + 0.5 * w.squaredNorm() / (a * a);
        for (int k = 0; k < d; ++k) {
            m(0, 1 + k) = -w(k) / a;
        }
        for (int i = 0; i < d; ++i) {
            m(1 + i, 0) = -0.5 * w(i) / (a * std::sqrt(a));
            m(1 + i, 1 + i) = 1.0 / std::sqrt(a);
        }
        return m;
    }

    Mat do_hess_eta(const Vec& u) const override {
        const int d = space_dim();
        Mat m = Mat::Identity(1 + d, 1 + d);
        m(0, 0) = potential_dd(u(0));
        return m;
    }

    std::vector<Mat> do_hess_A(const Vec& u) const override {
        const int d = space_dim();
        const double a = u(0);
        std::vector<Mat> out(1 + d, Mat::Zero(1 + d, 1 + d));
        for (int i = 0; i < d; ++i) {
            Mat& m = out[1 + i];
            m(0, 0) = -0.25 * u(1 + i) / (a * std::sqrt(a));
            m(0, 1 + i) = 0.5 / std::sqrt(a);
            m(1 + i, 0) = m(0, 1 + i);
        }
        return out;
    }

    Vec do_invert_A(const Vec& v, const VacuumPolicy& policy, long* clamp_events) const override {
        const int d = space_dim();
        double a = v(0);
        if (a < policy.rho_min) {
            if (policy.strict) {
                throw VacuumError("euler: conserved density below rho_min");
            }
            a = policy.rho_min;
            if (clamp_events != nullptr) {
                ++(*clamp_events);
            }
        }
        Vec u(1 + d);
        u(0) = a;
        u.tail(d) = v.tail(d) / std::sqrt(a);
        return u;
    }

  private:
    static Vec exponents(int d) {
        Vec e = Vec::Ones(1 + d);
        e(0) = 2.0;
        return e;
    }
    static DomainBox box(int d) {
        Vec lo(1 + d), hi(1 + d);
        lo(0) = 0.5;
        hi(0) = 2.0;
        for (int i = 0; i < d; ++i) {
            lo(1 + i) = -2.0;
            hi(1 + i) = 2.0;
        }
        return {lo, hi};
    }

    double gamma_;
    double offset_;
};

} // namespace

std::unique_ptr<System> make_euler(const SystemParams& params) {
    const int d = params.space_dim == 0 ? 1 : params.space_dim;
    if (d < 1 || d > 2) {
        throw ConfigError("euler: space_dim must be 1 or 2");
    }
    return std::make_unique<EulerSystem>(params.gamma, d);
}

} // namespace entroflux::detail
