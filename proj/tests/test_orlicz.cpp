#include <doctest.h>

#include <cmath>

#include "entroflux/errors.hpp"
#include "entroflux/orlicz.hpp"

using namespace entroflux;

TEST_CASE("fenchel conjugate of M2 in closed form and numerically") {
    const NFunction m2 = NFunction::M2();
    CHECK(fenchel_conjugate(m2, 2.0) == doctest::Approx(1.0).epsilon(1e-14));

    NFunction m2_numeric = m2;
    m2_numeric.closed_form_conjugate = nullptr;
    CHECK(fenchel_conjugate(m2_numeric, 2.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fenchel_conjugate(m2_numeric, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("M1 conjugate is stable under iteration doubling") {
    const NFunction m1 = NFunction::M1();
    const double a = fenchel_conjugate(m1, 10.0, 1e9, 200);
    const double b = fenchel_conjugate(m1, 10.0, 1e9, 400);
    CHECK(std::abs(a - b) < 1e-6 * (1.0 + std::abs(a)));
    CHECK(a > 0.0);
}

TEST_CASE("cap error when the maximizer escapes") {
    NFunction slow;
    slow.name = "sqrt";
    slow.M = [](double v) { return std::sqrt(v); };
    CHECK_THROWS_AS(fenchel_conjugate(slow, 1.0, 1e6), CapError);
}

TEST_CASE("Fenchel-Young inequality holds on sampled pairs") {
    CHECK(fenchel_young_max_violation(NFunction::M2(), 100000, 100.0, 100.0, 21) <= 1e-8);
    CHECK(fenchel_young_max_violation(NFunction::M1(), 100000, 100.0, 100.0, 22) <= 1e-6);
}

TEST_CASE("essentially stronger: (M1, M2) passes, (M, M) fails") {
    const NFunction m1 = NFunction::M1();
    const NFunction m2 = NFunction::M2();

    const StrongerReport good = essentially_stronger_check(m1, m2);
    CHECK(good.pass);
    CHECK(good.primal_pass);
    CHECK(good.dual_decreasing);
    for (const auto& row : good.table) {
        CHECK(row.decreasing);
    }

    const StrongerReport same = essentially_stronger_check(m1, m1);
    CHECK_FALSE(same.pass);
}

TEST_CASE("ratio anchor at v = 1e6, lambda = 5") {
    // M2(5v)/M1(v) = 25 / sqrt(log(v + 1))
    const NFunction m1 = NFunction::M1();
    const NFunction m2 = NFunction::M2();
    const double v = 1e6;
    const double ratio = m2.M(5.0 * v) / m1.M(v);
    CHECK(ratio == doctest::Approx(25.0 / std::sqrt(std::log(v + 1.0))).epsilon(1e-12));
    CHECK(ratio > 6.6);
    CHECK(ratio < 6.8);
}

TEST_CASE("dual trend M1*(xi)/xi^2 decreases") {
    const NFunction m1 = NFunction::M1();
    double prev = std::numeric_limits<double>::infinity();
    for (double xi : {1e2, 1e3, 1e4, 1e5, 1e6}) {
        const double ratio = fenchel_conjugate(m1, xi) / (xi * xi);
        CHECK(ratio < prev);
        prev = ratio;
    }
}

TEST_CASE("conjugate order reversal on power-law pairs") {
    Rng rng(33);
    for (int trial = 0; trial < 10; ++trial) {
        const double a = rng.uniform(0.5, 2.0);
        const double b = a + rng.uniform(0.1, 1.0);
        const double p = rng.uniform(1.5, 3.0);
        NFunction small{"small", [=](double v) { return a * std::pow(v, p); }, nullptr};
        NFunction big{"big", [=](double v) { return b * std::pow(v, p); }, nullptr};
        // big >= small pointwise, so big* <= small*
        for (double xi : {0.5, 1.0, 5.0, 20.0}) {
            CHECK(fenchel_conjugate(big, xi) <= fenchel_conjugate(small, xi) + 1e-9);
        }
    }
}

TEST_CASE("biconjugate lower bound") {
    const NFunction m1 = NFunction::M1();
    NFunction star{"M1*", [&](double xi) { return fenchel_conjugate(m1, xi); }, nullptr};
    for (double v : {0.5, 1.0, 2.0, 5.0, 20.0}) {
        const double biconj = fenchel_conjugate(star, v, 1e7);
        CHECK(biconj <= m1.M(v) + 1e-6);
    }
}
