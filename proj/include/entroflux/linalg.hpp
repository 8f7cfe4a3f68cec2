#pragma once

#include <Eigen/Dense>

#include "entroflux/errors.hpp"

namespace entroflux {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Spectral condition number via SVD (matrices here are at most 5x5).
inline double condition_number(const Mat& m) {
    Eigen::JacobiSVD<Mat> svd(m);
    const auto& s = svd.singularValues();
    if (s(s.size() - 1) <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return s(0) / s(s.size() - 1);
}

/// Solves m*x = rhs by partial-pivot LU; throws SingularError when the system
/// is numerically singular (condition number above `cond_limit`).
inline Vec lu_solve(const Mat& m, const Vec& rhs, double cond_limit = 1e12) {
    if (condition_number(m) > cond_limit) {
        throw SingularError("matrix is numerically singular (cond > 1e12)");
    }
    return Eigen::PartialPivLU<Mat>(m).solve(rhs);
}

inline double min_eigenvalue_symmetric(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

} // namespace entroflux
