#include <doctest.h>

#include <cmath>

#include "entroflux/errors.hpp"
#include "entroflux/relent.hpp"
#include "oracles.hpp"

using namespace entroflux;

namespace {

Vec v2(double a, double b) {
    Vec u(2);
    u << a, b;
    return u;
}

} // namespace

TEST_CASE("pinned relative-entropy anchors for 1D euler, gamma = 2") {
    const auto euler = make_system("euler");
    CHECK(relative_entropy(*euler, v2(1, 1), v2(1, 1)) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(relative_entropy(*euler, v2(1, 0), v2(0.5, 0)) == doctest::Approx(0.25).epsilon(1e-12));
    // boundary state against an interior reference
    CHECK(relative_entropy(*euler, v2(0, 0), v2(1, 0)) == doctest::Approx(1.0).epsilon(1e-12));

    const Vec rf = relative_flux(*euler, 0, v2(1, 0), v2(0.5, 0));
    CHECK(rf(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rf(1) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(relative_flux(*euler, 0, v2(1, 1), v2(1, 1)).lpNorm<Eigen::Infinity>() < 1e-14);
}

TEST_CASE("reference state must be interior") {
    const auto euler = make_system("euler");
    CHECK_THROWS_AS(relative_entropy(*euler, v2(1, 0), v2(0, 0)), DomainError);
}

TEST_CASE("averaged quantities are weight averages of pointwise ones") {
    const auto euler = make_system("euler");
    MeasureCell two{{v2(1, 0), v2(0.5, 0)}, {0.5, 0.5}};
    const Vec U = v2(0.5, 0);
    CHECK(averaged_H(*euler, two, U) == doctest::Approx(0.125).epsilon(1e-12));
    const AveragedZ z = averaged_Z(*euler, 0, two, U);
    CHECK(z.value(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(z.value(1) == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(z.ratio_to_H == doctest::Approx(1.0).epsilon(1e-10));

    MeasureCell dirac{{U}, {1.0}};
    CHECK(averaged_H(*euler, dirac, U) == doctest::Approx(0.0));
    CHECK(averaged_Z(*euler, 0, dirac, U).value.lpNorm<Eigen::Infinity>() < 1e-14);

    // linearity on random measures
    Rng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        MeasureCell nu;
        double wsum = 0.0;
        const int atoms = 2 + static_cast<int>(rng.uniform(0, 4));
        for (int a = 0; a < atoms; ++a) {
            nu.atoms.push_back(v2(rng.uniform(0.4, 2.0), rng.uniform(-2.0, 2.0)));
            nu.weights.push_back(rng.uniform(0.1, 1.0));
            wsum += nu.weights.back();
        }
        for (auto& w : nu.weights) {
            w /= wsum;
        }
        const Vec Uref = v2(rng.uniform(0.6, 1.8), rng.uniform(-1.5, 1.5));
        double direct = 0.0;
        for (std::size_t a = 0; a < nu.atoms.size(); ++a) {
            direct += nu.weights[a] * relative_entropy(*euler, nu.atoms[a], Uref);
        }
        const double avg = averaged_H(*euler, nu, Uref);
        CHECK(std::abs(avg - direct) < 1e-14 * (1.0 + std::abs(direct)));
        CHECK(avg >= -1e-12);
    }
}

TEST_CASE("weights must normalize") {
    const auto euler = make_system("euler");
    MeasureCell bad{{v2(1, 0)}, {0.5}};
    CHECK_THROWS_AS(averaged_H(*euler, bad, v2(1, 0)), MeasureError);
}

TEST_CASE("entropy offset cancels from the relative entropy") {
    const auto euler = make_system("euler");
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const Vec u = v2(rng.uniform(0.3, 2.5), rng.uniform(-2, 2));
        const Vec U = v2(rng.uniform(0.6, 1.8), rng.uniform(-1.5, 1.5));
        const double shift = 123.456;
        const double shifted = (euler->eta(u) + shift) - (euler->eta(U) + shift) -
                               euler->G(U).dot(euler->A(u) - euler->A(U));
        CHECK(std::abs(shifted - relative_entropy(*euler, u, U)) < 1e-14 * (1.0 + std::abs(shifted)));
    }
}

TEST_CASE("relative entropy is quadratic near the reference") {
    const auto euler = make_system("euler");
    const Vec U = v2(1.0, 0.3);
    Rng rng(23);
    Vec w = rng.unit_vector(2);
    const Mat m = euler->hessian_form(U);
    const double limit = 0.5 * w.dot(m * w);

    std::vector<double> eps_list = {1e-1, 5e-2, 2.5e-2, 1.25e-2, 6.25e-3};
    std::vector<double> values;
    for (double eps : eps_list) {
        values.push_back(relative_entropy(*euler, U + eps * w, U));
    }
    // measured order of the value itself: eta(U + eps w | U) ~ eps^2
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        const double order = std::log(values[i] / values[i + 1]) / std::log(2.0);
        CHECK(order >= 1.9);
        CHECK(order <= 2.2);
    }
    CHECK(values.back() / (eps_list.back() * eps_list.back()) ==
          doctest::Approx(limit).epsilon(2e-2));
}

TEST_CASE("lu_solve flags numerically singular systems") {
    Mat singular = Mat::Zero(2, 2);
    singular(0, 0) = 1.0;
    Vec rhs = Vec::Ones(2);
    CHECK_THROWS_AS(lu_solve(singular, rhs), SingularError);
}
