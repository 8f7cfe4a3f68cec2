#include <doctest.h>

#include "entroflux/errors.hpp"
#include "entroflux/systems.hpp"
#include "oracles.hpp"

using namespace entroflux;

namespace {

Vec v2(double a, double b) {
    Vec u(2);
    u << a, b;
    return u;
}

Vec v5(double a, double b, double c, double d, double e) {
    Vec u(5);
    u << a, b, c, d, e;
    return u;
}

} // namespace

TEST_CASE("euler closed forms at pinned states") {
    const auto euler = make_system("euler");
    // gamma = 2: P(rho) = rho^2 - rho, offset 1/4
    CHECK(euler->eta(v2(1.0, 0.0)) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(euler->eta(v2(0.5, 0.0)) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(euler->eta(v2(0.0, 0.0)) == doctest::Approx(0.25).epsilon(1e-14)); // boundary state

    const Vec g = euler->G(v2(1.0, 1.0));
    CHECK(g(0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(g(1) == doctest::Approx(1.0).epsilon(1e-14));

    const Mat dA = euler->grad_A(v2(0.5, 0.0));
    CHECK(dA(0, 0) == doctest::Approx(1.0));
    CHECK(dA(0, 1) == doctest::Approx(0.0));
    CHECK(dA(1, 0) == doctest::Approx(0.0));
    CHECK(dA(1, 1) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));

    const Mat dF = euler->grad_F(0, v2(0.5, 0.0));
    CHECK(dF(0, 0) == doctest::Approx(0.0));
    CHECK(dF(0, 1) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(dF(1, 0) == doctest::Approx(1.0).epsilon(1e-14)); // p'(1/2) = 1
    CHECK(dF(1, 1) == doctest::Approx(0.0));

    Mat hf = euler->hessian_form(v2(1.0, 0.0));
    CHECK(hf(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(hf(0, 1) == doctest::Approx(0.0));
    CHECK(hf(1, 1) == doctest::Approx(1.0));

    hf = euler->hessian_form(v2(1.0, 1.0));
    CHECK(hf(0, 0) == doctest::Approx(2.25).epsilon(1e-14));
    CHECK(hf(0, 1) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(hf(1, 0) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(hf(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("swmhd closed forms at pinned states") {
    const auto swmhd = make_system("swmhd");
    CHECK(swmhd->eta(v5(1, 0, 0, 0, 0)) == doctest::Approx(4.905).epsilon(1e-14));
    const Mat hf = swmhd->hessian_form(v5(1, 0, 0, 0, 0));
    CHECK(hf(0, 0) == doctest::Approx(9.81).epsilon(1e-14));
    for (int i = 1; i < 5; ++i) {
        CHECK(hf(i, i) == doctest::Approx(1.0));
        CHECK(hf(0, i) == doctest::Approx(0.0));
    }
}

TEST_CASE("incompressible Euler multiplier is the identity") {
    const auto sys = make_system("inc-euler");
    const Vec g = sys->G(v2(1.0, 2.0));
    CHECK(g(0) == doctest::Approx(1.0));
    CHECK(g(1) == doctest::Approx(2.0));
    CHECK(sys->grad_A(v2(0.0, 0.0)) == Mat::Identity(2, 2));
}

TEST_CASE("invert_A recovers states and guards vacuum") {
    const auto euler = make_system("euler");
    CHECK((euler->invert_A(v2(1, 2)) - v2(1, 2)).lpNorm<Eigen::Infinity>() < 1e-14);
    CHECK((euler->invert_A(v2(4, 2)) - v2(4, 1)).lpNorm<Eigen::Infinity>() < 1e-14);

    VacuumPolicy strict{true, 1e-10};
    CHECK_THROWS_AS(euler->invert_A(v2(0, 1), strict), VacuumError);

    long clamps = 0;
    const Vec u = euler->invert_A(v2(0, 1), {false, 1e-10}, &clamps);
    CHECK(clamps == 1);
    CHECK(u(0) == doctest::Approx(1e-10));
}

TEST_CASE("invert_A is a right inverse of A on interior samples") {
    Rng rng(11);
    for (const auto& id : registered_system_ids()) {
        const auto sys = make_system(id);
        const DomainBox& box = sys->default_box();
        for (int s = 0; s < 50; ++s) {
            Vec u(sys->state_dim());
            for (int i = 0; i < u.size(); ++i) {
                u(i) = rng.uniform(box.lo(i), box.hi(i));
            }
            const Vec back = sys->invert_A(sys->A(u));
            CHECK((back - u).lpNorm<Eigen::Infinity>() <
                  1e-12 * (1.0 + u.lpNorm<Eigen::Infinity>()));
        }
    }
}

TEST_CASE("analytic jacobians match finite differences for all systems") {
    Rng rng(7);
    for (const auto& id : registered_system_ids()) {
        CAPTURE(id);
        const auto sys = make_system(id);
        const DomainBox& box = sys->default_box();
        for (int s = 0; s < 100; ++s) {
            Vec u(sys->state_dim());
            for (int i = 0; i < u.size(); ++i) {
                u(i) = rng.uniform(box.lo(i), box.hi(i));
            }
            CHECK(oracle::scaled_dev(sys->grad_A(u), oracle::central_jacobian(
                      [&](const Vec& x) { return sys->A(x); }, u)) < 1e-5);
            CHECK(oracle::scaled_dev(sys->grad_G(u), oracle::central_jacobian(
                      [&](const Vec& x) { return sys->G(x); }, u)) < 1e-5);
            CHECK(oracle::scaled_dev(sys->grad_eta(u), oracle::central_gradient(
                      [&](const Vec& x) { return sys->eta(x); }, u)) < 1e-5);
            for (int alpha = 0; alpha < sys->space_dim(); ++alpha) {
                CHECK(oracle::scaled_dev(sys->grad_F(alpha, u), oracle::central_jacobian(
                          [&](const Vec& x) { return sys->F(alpha, x); }, u)) < 1e-5);
                CHECK(oracle::scaled_dev(sys->grad_q(alpha, u), oracle::central_gradient(
                          [&](const Vec& x) { return sys->q(alpha, x); }, u)) < 1e-5);
            }
        }
    }
}

TEST_CASE("hessian_form is symmetric with real spectrum") {
    Rng rng(13);
    for (const auto& id : registered_system_ids()) {
        const auto sys = make_system(id);
        const DomainBox& box = sys->default_box();
        for (int s = 0; s < 20; ++s) {
            Vec u(sys->state_dim());
            for (int i = 0; i < u.size(); ++i) {
                u(i) = rng.uniform(box.lo(i), box.hi(i));
            }
            const Mat hf = sys->hessian_form(u);
            CHECK((hf - hf.transpose()).cwiseAbs().maxCoeff() == 0.0);
            Eigen::SelfAdjointEigenSolver<Mat> es(hf, Eigen::EigenvaluesOnly);
            CHECK(es.eigenvalues().allFinite());
        }
    }
}

TEST_CASE("domain guards") {
    const auto euler = make_system("euler");
    CHECK_THROWS_AS(euler->eta(v2(-0.1, 0.0)), DomainError);
    CHECK_THROWS_AS(euler->G(v2(0.0, 1.0)), DomainError);
    CHECK_THROWS_AS(euler->q(0, v2(0.0, 1.0)), DomainError);
    CHECK_THROWS_AS(euler->grad_A(v2(1e-12, 0.0)), DomainError); // inside the margin
    CHECK_THROWS_AS(euler->F(2, v2(1.0, 0.0)), DomainError);     // alpha out of range
    CHECK_NOTHROW(euler->F(0, v2(0.0, 1.0)));                    // closure is fine for F
}

TEST_CASE("project_Y is idempotent and kills the divergence") {
    // spec invariant: 100 random spectral fields across the constrained systems
    const std::vector<std::string> constrained = {"inc-euler", "inc-mhd", "swmhd",
                                                  "nonhom-inc-euler", "nonhom-inc-mhd"};
    Rng rng(101);
    int fields_done = 0;
    for (const auto& id : constrained) {
        const auto sys = make_system(id);
        REQUIRE(sys->constraint() != nullptr);
        for (int f = 0; f < 20; ++f) {
            StateField2D field = sample_smooth_state_field(*sys, 32, rng);
            sys->constraint()->project(field);
            CHECK(sys->constraint()->max_divergence(field) < 1e-10);
            StateField2D twice = field;
            sys->constraint()->project(twice);
            double dev = 0.0;
            for (std::size_t i = 0; i < field.data.size(); ++i) {
                dev = std::max(dev, std::abs(field.data[i] - twice.data[i]));
            }
            CHECK(dev < 1e-10);
            ++fields_done;
        }
    }
    CHECK(fields_done == 100);
}

TEST_CASE("registry rejects unknown ids with the catalogue") {
    CHECK_THROWS_WITH_AS(make_system("navier"), doctest::Contains("registered:"), ConfigError);
}
