#pragma once

#include <cstddef>

#include "tsreason/core/time_series.hpp"
#include "tsreason/core/value.hpp"

namespace tsreason::stats {

/// Pairwise Granger causality over all columns of a frame.
///
/// For each ordered pair (i, j) with i != j the entry [i][j] is the p-value of
/// an F-test comparing the restricted regression of column j on its own
/// max_lag lags against the unrestricted one that also includes max_lag lags
/// of column i. Small p-values mean "column i helps predict column j".
/// Diagonal entries are 0.
Matrix causal_matrix(const Frame& frame, int max_lag);

/// Keep the k = round(ratio * d * (d - 1)) strongest relations (smallest
/// off-diagonal p-values) and return a 0/1 adjacency matrix. Ties break on
/// (p, row, col) so the result is stable.
Matrix select_top_ratio(const Matrix& pvals, double ratio);

}  // namespace tsreason::stats
