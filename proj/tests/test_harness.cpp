#include <doctest.h>

#include <cmath>

#include "entroflux/errors.hpp"
#include "entroflux/harness.hpp"

using namespace entroflux;

namespace {

Vec v2(double a, double b) {
    Vec u(2);
    u << a, b;
    return u;
}

InitSpec benchmark_spec(double amp = 0.05) {
    Vec base(2), ampv(2);
    base << 1.0, 0.0;
    ampv << amp, 0.0;
    return InitSpec::smooth_periodic(base, ampv, 1);
}

} // namespace

TEST_CASE("a run against itself at unit coarsening has zero relative entropy") {
    const auto euler = make_system("euler");
    TorusGrid grid{1, 64, 0.05, 0.4};
    const Trajectory traj = run(*euler, grid, benchmark_spec(), Scheme::LaxFriedrichs);
    const GronwallSeries series = relent_trajectory(*euler, traj, traj, 1);
    for (std::size_t k = 0; k < series.size(); ++k) {
        CHECK(std::abs(series.value(k)) <= 1e-14);
    }
}

TEST_CASE("coarse-versus-fine series is positive, finite, and shrinks with h") {
    const auto euler = make_system("euler");
    ReferenceOptions ref_opts;
    TorusGrid ref_grid{1, 1024, 0.05, 0.4};
    const Trajectory ref = reference_solution(*euler, ref_grid, benchmark_spec(), ref_opts);

    double terminal_prev = 0.0;
    int idx = 0;
    for (int N : {128, 256}) {
        TorusGrid grid{1, N, 0.05, 0.4};
        const Trajectory traj = run(*euler, grid, benchmark_spec(), Scheme::LaxFriedrichs);
        const GronwallSeries series = relent_trajectory(*euler, traj, ref, 4);
        CHECK(series.H.front() > 0.0);
        for (double h : series.H) {
            CHECK(std::isfinite(h));
            CHECK(h >= -1e-10);
        }
        if (idx == 1) {
            CHECK(terminal_prev / series.value(series.size() - 1) >= 1.3);
        }
        terminal_prev = series.value(series.size() - 1);
        ++idx;
    }
}

TEST_CASE("time misalignment is rejected") {
    const auto euler = make_system("euler");
    TorusGrid g1{1, 64, 0.05, 0.4};
    TorusGrid g2{1, 128, 0.05, 0.4};
    RunOptions opts;
    opts.n_snapshots = 11;
    const Trajectory a = run(*euler, g1, benchmark_spec(), Scheme::LaxFriedrichs, opts);
    opts.n_snapshots = 7;
    const Trajectory b = run(*euler, g2, benchmark_spec(), Scheme::LaxFriedrichs, opts);
    CHECK_THROWS_AS(relent_trajectory(*euler, a, b, 4), GridError);
}

TEST_CASE("gronwall fitting: zero series, growing series, adversarial blow-up") {
    GronwallSeries zero;
    zero.times = {0.0, 0.01, 0.02};
    zero.H = {0.0, 0.0, 0.0};
    zero.concentration = {0.0, 0.0, 0.0};
    const GronwallFit fit0 = fit_gronwall(zero, 10.0);
    CHECK(fit0.pass);
    CHECK(fit0.c == 0.0);

    GronwallSeries grow;
    grow.times = {0.0, 0.01, 0.02};
    grow.H = {1e-4, 1.2e-4, 1.5e-4};
    grow.concentration = {0.0, 0.0, 0.0};
    const GronwallFit fit1 = fit_gronwall(grow, 100.0);
    CHECK(fit1.pass);
    CHECK(fit1.c >= std::log(1.5 / 1.01) / 0.02 - 1.0);
    CHECK(fit1.c <= 100.0);

    GronwallSeries blowup;
    blowup.times = {0.0, 0.01, 0.02};
    blowup.H = {1e-8, 1e-3, 1e-1};
    blowup.concentration = {0.0, 0.0, 0.0};
    CHECK_THROWS_AS(fit_gronwall(blowup, 20.0), FitError);
}

TEST_CASE("uniqueness probe on a reduced ladder") {
    const auto euler = make_system("euler");
    UniquenessOptions opts;
    opts.ref_multiple = 8;
    const UniquenessReport rep =
        uniqueness_probe(*euler, benchmark_spec(), {32, 64, 128}, 0.05, opts);
    CHECK(rep.monotone_H);
    CHECK(rep.monotone_variance);
    CHECK(rep.rate_H >= 0.4);
    CHECK(rep.rate_variance >= 0.4);
    CHECK(rep.negative_ratio >= 10.0);
    CHECK(rep.concentration_negligible);
    for (const auto& fit : rep.fits) {
        CHECK(fit.pass);
    }
    CHECK(rep.pass);
}

TEST_CASE("constant data yield identically zero probe metrics") {
    const auto euler = make_system("euler");
    UniquenessOptions opts;
    opts.ref_multiple = 8;
    const UniquenessReport rep =
        uniqueness_probe(*euler, InitSpec::constant(v2(1, 0)), {16, 32}, 0.02, opts);
    for (double h : rep.terminal_H) {
        CHECK(std::abs(h) <= 1e-14);
    }
    for (double v : rep.terminal_variance) {
        CHECK(v <= 1e-14);
    }
    CHECK(rep.pass);
}

TEST_CASE("probe rejects degenerate ladders") {
    const auto euler = make_system("euler");
    CHECK_THROWS_AS(uniqueness_probe(*euler, benchmark_spec(), {64}, 0.05, {}), ConfigError);
    CHECK_THROWS_AS(uniqueness_probe(*euler, benchmark_spec(), {64, 64}, 0.05, {}), ConfigError);
}
