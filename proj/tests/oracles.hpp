#pragma once

// Test-side oracles, kept independent of the library's own checking paths.

#include <cmath>
#include <functional>

#include "entroflux/linalg.hpp"

namespace oracle {

using entroflux::Mat;
using entroflux::Vec;

/// Central-difference Jacobian of f at u.
inline Mat central_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& u) {
    const int n = static_cast<int>(u.size());
    const int m = static_cast<int>(f(u).size());
    Mat j(m, n);
    for (int i = 0; i < n; ++i) {
        const double h = 1e-6 * std::max(1.0, std::abs(u(i)));
        Vec up = u, um = u;
        up(i) += h;
        um(i) -= h;
        j.col(i) = (f(up) - f(um)) / (2.0 * h);
    }
    return j;
}

inline Vec central_gradient(const std::function<double(const Vec&)>& f, const Vec& u) {
    const int n = static_cast<int>(u.size());
    Vec g(n);
    for (int i = 0; i < n; ++i) {
        const double h = 1e-6 * std::max(1.0, std::abs(u(i)));
        Vec up = u, um = u;
        up(i) += h;
        um(i) -= h;
        g(i) = (f(up) - f(um)) / (2.0 * h);
    }
    return g;
}

/// Scaled deviation |a - b|_inf / (1 + |a|_inf).
inline double scaled_dev(const Mat& a, const Mat& b) {
    return (a - b).cwiseAbs().maxCoeff() / (1.0 + a.cwiseAbs().maxCoeff());
}

inline double scaled_dev(const Vec& a, const Vec& b) {
    return (a - b).lpNorm<Eigen::Infinity>() / (1.0 + a.lpNorm<Eigen::Infinity>());
}

/// Least-squares slope of log(v) against log(h).
inline double convergence_rate(const std::vector<double>& h, const std::vector<double>& v) {
    const std::size_t n = h.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(h[i]);
        my += std::log(v[i]);
    }
    mx /= n;
    my /= n;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += (std::log(h[i]) - mx) * (std::log(v[i]) - my);
        den += (std::log(h[i]) - mx) * (std::log(h[i]) - mx);
    }
    return num / den;
}

} // namespace oracle
