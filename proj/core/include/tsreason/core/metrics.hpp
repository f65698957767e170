#pragma once

#include <string>
#include <vector>

#include "tsreason/core/value.hpp"

namespace tsreason {

/// Score of a candidate solution under one metric; metric is one of
/// "mape", "f1", "pair_accuracy".
struct Quality {
    std::string metric;
    double value = 0.0;
    bool operator==(const Quality&) const = default;
};

/// Mean absolute percentage error: mean_t |a_t - p_t| / |a_t|.
/// Throws OpError("LengthMismatch") on ragged input and
/// OpError("ZeroDenominator") when any |a_t| < 1e-12.
double mape(const std::vector<double>& actual, const std::vector<double>& predicted);

/// MAPE with the per-term denominator floored at `eps`. Scoring and backtests
/// use this variant so evaluation never divides by zero.
double mape_guarded(const std::vector<double>& actual, const std::vector<double>& predicted,
                    double eps = 1e-8);

/// Binary F1 over aligned masks. The degenerate no-positives-anywhere case
/// (empty truth, empty prediction) counts as a perfect 1.0.
double f1_binary(const BinVec& truth, const BinVec& predicted);

/// Fraction of ordered off-diagonal pairs (i, j), i != j, on which the two
/// square 0/1 matrices agree. Throws OpError("ShapeMismatch") unless both are
/// d x d with d >= 2 and 0/1 entries.
double pair_accuracy(const Matrix& truth, const Matrix& predicted);

}  // namespace tsreason
