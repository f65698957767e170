#pragma once

#include <vector>

#include "tsreason/core/value.hpp"

namespace tsreason::numerics {

struct LstsqResult {
    std::vector<double> beta;
    double rss = 0.0;
    long rank = 0;
    /// Coefficient standard errors; filled only for full-rank lambda == 0
    /// solves with more rows than columns, empty otherwise.
    std::vector<double> std_errors;
};

/// Least squares / ridge solve of X beta ~= y (X row-major, rows >= cols > 0).
///
/// lambda == 0 uses a rank-revealing orthogonal decomposition; a
/// rank-deficient design throws OpError("SingularRegression") unless
/// `allow_rank_deficient`, in which case the minimum-norm solution is
/// returned. lambda > 0 solves the ridge normal equations; column 0 is
/// treated as the intercept and is not penalized.
LstsqResult lstsq(const Matrix& X, const std::vector<double>& y, double lambda = 0.0,
                  bool allow_rank_deficient = false);

}  // namespace tsreason::numerics
