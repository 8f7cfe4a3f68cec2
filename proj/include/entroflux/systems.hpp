#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "entroflux/linalg.hpp"
#include "entroflux/rng.hpp"
#include "entroflux/spectral.hpp"

namespace entroflux {

/// Per-coordinate interval bounds of a compact box in state space.
struct DomainBox {
    Vec lo;
    Vec hi;

    int dim() const { return static_cast<int>(lo.size()); }
    bool contains(const Vec& u) const {
        for (int i = 0; i < dim(); ++i) {
            if (u(i) < lo(i) || u(i) > hi(i)) {
                return false;
            }
        }
        return true;
    }
};

struct VacuumPolicy {
    bool strict = false;
    double rho_min = 1e-10;
};

/// Sampled state field on the NxN periodic torus (row-major cells, n state
/// components per cell).
struct StateField2D {
    int N = 0;
    int n = 0;
    std::vector<double> data;

    StateField2D() = default;
    StateField2D(int N_, int n_) : N(N_), n(n_), data(static_cast<std::size_t>(N_) * N_ * n_, 0.0) {}

    std::size_t cells() const { return static_cast<std::size_t>(N) * N; }
    double* cell(std::size_t i) { return data.data() + i * n; }
    const double* cell(std::size_t i) const { return data.data() + i * n; }
    Vec state(std::size_t i) const {
        return Eigen::Map<const Vec>(cell(i), n);
    }
    void set_state(std::size_t i, const Vec& u) {
        Eigen::Map<Vec>(cell(i), n) = u;
    }
};

/// Constraint structure of the extended framework: the subspace Y is realized
/// as a divergence-free condition on designated (possibly derived) 2D vector
/// fields, with the companion-law correction fluxes Lbar.
class Constraint {
  public:
    struct DesignatedField {
        std::string name;
        std::function<std::array<double, 2>(const Vec&)> extract;
        std::function<void(Vec&, const std::array<double, 2>&)> inject;
    };

    Constraint(std::string L_description, std::vector<DesignatedField> fields,
               std::function<Vec(int, const Vec&)> lbar)
        : L_description_(std::move(L_description)), fields_(std::move(fields)),
          lbar_(std::move(lbar)) {}

    const std::string& L_description() const { return L_description_; }
    int num_designated() const { return static_cast<int>(fields_.size()); }
    const std::string& field_name(int j) const { return fields_[j].name; }

    /// The correction flux Lbar_alpha(u) of the relaxed companion identity.
    Vec Lbar(int alpha, const Vec& u) const { return lbar_(alpha, u); }

    /// Removes the gradient part of each designated field (all by default).
    void project(StateField2D& field, const std::vector<int>* which = nullptr) const;

    /// Max-norm of the spectral divergence over designated fields (Y test).
    double max_divergence(const StateField2D& field) const;

  private:
    std::string L_description_;
    std::vector<DesignatedField> fields_;
    std::function<Vec(int, const Vec&)> lbar_;
};

/// A hyperbolic system with its entropy structure: the quantities of
/// d_t A(u) + d_alpha F_alpha(u) = 0 together with eta, q_alpha, the
/// multiplier G and hand-coded first/second derivatives. Immutable after
/// construction; every evaluation is pure.
class System {
  public:
    virtual ~System() = default;

    const std::string& name() const { return name_; }
    int state_dim() const { return n_; }
    int space_dim() const { return d_; }
    const Vec& scaling_exponents() const { return exponents_; }
    const DomainBox& default_box() const { return box_; }
    double interior_margin() const { return margin_; }

    /// Membership in the closure of the state domain X.
    virtual bool in_closure(const Vec& u) const = 0;
    /// Distance to the boundary of X (+inf when X = R^n).
    virtual double boundary_distance(const Vec& u) const = 0;
    bool in_interior(const Vec& u, double margin = 0.0) const {
        return in_closure(u) && boundary_distance(u) > margin;
    }

    // Quantities. A, F, eta extend continuously to the closure; q and G need
    // the open set; derivatives additionally keep a margin from the boundary.
    Vec A(const Vec& u) const;
    Vec F(int alpha, const Vec& u) const;
    double eta(const Vec& u) const;
    double q(int alpha, const Vec& u) const;
    Vec G(const Vec& u) const;

    Mat grad_A(const Vec& u) const;
    Mat grad_F(int alpha, const Vec& u) const;
    Vec grad_eta(const Vec& u) const;
    Vec grad_q(int alpha, const Vec& u) const;
    Mat grad_G(const Vec& u) const;
    Mat hess_eta(const Vec& u) const;
    std::vector<Mat> hess_A(const Vec& u) const;

    /// The symmetric matrix hess(eta) - G . hess(A), symmetrized numerically.
    Mat hessian_form(const Vec& u) const;

    /// State recovery u with A(u) = v. Lenient mode clamps the density-like
    /// component at rho_min and counts the event; strict mode throws.
    Vec invert_A(const Vec& v, const VacuumPolicy& policy = {}, long* clamp_events = nullptr) const;

    virtual bool solver_supported() const { return false; }
    /// Upper bound on |wave speed| at state u (without safety factor).
    virtual double wave_speed_bound(const Vec& u) const;

    const Constraint* constraint() const { return constraint_.get(); }

  protected:
    System(std::string name, int n, int d, Vec exponents, DomainBox box, double margin = 1e-8)
        : name_(std::move(name)), n_(n), d_(d), exponents_(std::move(exponents)),
          box_(std::move(box)), margin_(margin) {}

    virtual Vec do_A(const Vec& u) const = 0;
    virtual Vec do_F(int alpha, const Vec& u) const = 0;
    virtual double do_eta(const Vec& u) const = 0;
    virtual double do_q(int alpha, const Vec& u) const = 0;
    virtual Vec do_G(const Vec& u) const = 0;
    virtual Mat do_grad_A(const Vec& u) const = 0;
    virtual Mat do_grad_F(int alpha, const Vec& u) const = 0;
    virtual Vec do_grad_eta(const Vec& u) const = 0;
    virtual Vec do_grad_q(int alpha, const Vec& u) const = 0;
    virtual Mat do_grad_G(const Vec& u) const = 0;
    virtual Mat do_hess_eta(const Vec& u) const = 0;
    virtual std::vector<Mat> do_hess_A(const Vec& u) const = 0;
    virtual Vec do_invert_A(const Vec& v, const VacuumPolicy& policy, long* clamp_events) const = 0;

    void check_closure(const Vec& u) const;
    void check_interior(const Vec& u, bool with_margin) const;
    void check_alpha(int alpha) const;

    std::unique_ptr<Constraint> constraint_;

  private:
    std::string name_;
    int n_;
    int d_;
    Vec exponents_;
    DomainBox box_;
    double margin_;
};

struct SystemParams {
    double gamma = 2.0;    // euler pressure law p = rho^gamma
    double g = 9.81;       // swmhd gravity
    double rho_min = 1e-10;
    int space_dim = 0;     // 0 = system default (euler: 1, others: 2)
};

/// Registered identifiers: euler, swmhd, inc-euler, inc-mhd,
/// nonhom-inc-euler, nonhom-inc-mhd.
std::unique_ptr<System> make_system(const std::string& id, const SystemParams& params = {});
const std::vector<std::string>& registered_system_ids();

/// Smooth band-limited random state field with values inside the system's
/// default box (used by the constraint checks).
StateField2D sample_smooth_state_field(const System& system, int N, Rng& rng, int max_mode = 3);

} // namespace entroflux
