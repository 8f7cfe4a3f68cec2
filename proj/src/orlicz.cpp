#include "entroflux/orlicz.hpp"

#include <cmath>

#include "entroflux/errors.hpp"

namespace entroflux {

NFunction NFunction::M1() {
    NFunction f;
    f.name = "M1";
    f.M = [](double v) { return v * v * std::sqrt(std::log(v + 1.0)); };
    return f;
}

NFunction NFunction::M2() {
    NFunction f;
    f.name = "M2";
    f.M = [](double v) { return v * v; };
    f.closed_form_conjugate = [](double xi) { return 0.25 * xi * xi; };
    return f;
}

double fenchel_conjugate(const NFunction& m, double xi, double search_cap, int iterations) {
    if (xi < 0.0) {
        throw DomainError("fenchel_conjugate: xi must be nonnegative");
    }
    if (m.closed_form_conjugate) {
        return m.closed_form_conjugate(xi);
    }
    if (xi == 0.0) {
        return 0.0; // sup(-M) attained at rho = 0
    }
    const auto objective = [&](double rho) { return xi * rho - m.M(rho); };
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0;
    double b = search_cap;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    for (int it = 0; it < iterations; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = objective(d);
        }
    }
    const double rho_star = 0.5 * (a + b);
    if (rho_star > 0.999 * search_cap) {
        throw CapError("fenchel_conjugate: maximizer hit the search cap");
    }
    return std::max(0.0, objective(rho_star));
}

double fenchel_young_max_violation(const NFunction& m, int n_pairs, double v_max,
                                   double w_max, std::uint64_t seed, double conjugate_cap) {
    Rng rng(seed);
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_pairs; ++i) {
        const double v = rng.uniform(0.0, v_max);
        const double w = rng.uniform(0.0, w_max);
        const double slack = v * w - m.M(v) - fenchel_conjugate(m, w, conjugate_cap);
        worst = std::max(worst, slack);
    }
    return worst;
}

StrongerReport essentially_stronger_check(const NFunction& m1, const NFunction& m2,
                                          std::vector<double> lambda_grid,
                                          std::vector<double> v_grid, double threshold,
                                          std::vector<double> xi_grid) {
    if (lambda_grid.empty()) {
        lambda_grid = {0.5, 1.0, 2.0, 5.0};
    }
    if (v_grid.empty()) {
        // Geometric ladder deep into the double range: sqrt(log v) decays so
        // slowly that the 0.05 factor needs v ~ 1e145 when starting at 1.1.
        const double lo = 1.1;
        const double hi = 1e145;
        const int points = 60;
        for (int i = 0; i < points; ++i) {
            v_grid.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1)));
        }
    }
    if (xi_grid.empty()) {
        for (double xi = 1e2; xi <= 1.0000001e6; xi *= 10.0) {
            xi_grid.push_back(xi);
        }
    }
    for (std::size_t i = 1; i < v_grid.size(); ++i) {
        if (v_grid[i] <= v_grid[i - 1]) {
            throw ConfigError("essentially_stronger_check: v_grid must be increasing");
        }
    }

    StrongerReport report;
    report.threshold = threshold;
    report.primal_pass = true;
    for (double lambda : lambda_grid) {
        StrongerRatioRow row{lambda, 0.0, 0.0, true};
        double prev = std::numeric_limits<double>::infinity();
        bool first = true;
        for (double v : v_grid) {
            const double num = m2.M(lambda * v);
            const double den = m1.M(v);
            if (!std::isfinite(num) || !std::isfinite(den) || den <= 0.0) {
                break; // grid truncated at the floating-point range
            }
            const double ratio = num / den;
            if (first) {
                row.first_ratio = ratio;
                first = false;
            } else if (ratio > prev * (1.0 + 1e-12)) {
                row.decreasing = false;
            }
            row.last_ratio = ratio;
            prev = ratio;
        }
        if (first || row.last_ratio > threshold * row.first_ratio) {
            report.primal_pass = false;
        }
        report.table.push_back(row);
    }

    report.dual_decreasing = true;
    double prev_dual = std::numeric_limits<double>::infinity();
    for (double xi : xi_grid) {
        const double c1 = fenchel_conjugate(m1, xi);
        const double c2 = fenchel_conjugate(m2, xi);
        const double ratio = (c2 > 0.0) ? c1 / c2 : std::numeric_limits<double>::infinity();
        report.dual_ratios.push_back(ratio);
        if (ratio > prev_dual * (1.0 + 1e-9)) {
            report.dual_decreasing = false;
        }
        prev_dual = ratio;
    }

    report.pass = report.primal_pass && report.dual_decreasing;
    return report;
}

} // namespace entroflux
