#include "tsreason/core/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "tsreason/core/error.hpp"

namespace tsreason {
namespace {

void check_same_length(std::size_t a, std::size_t b, const char* what) {
    if (a != b)
        fail("LengthMismatch", std::string(what) + ": lengths differ (" + std::to_string(a) +
                                   " vs " + std::to_string(b) + ")");
    if (a == 0) fail("LengthMismatch", std::string(what) + ": empty input");
}

}  // namespace

double mape(const std::vector<double>& actual, const std::vector<double>& predicted) {
    check_same_length(actual.size(), predicted.size(), "mape");
    double sum = 0.0;
    for (std::size_t t = 0; t < actual.size(); ++t) {
        const double denom = std::abs(actual[t]);
        if (denom < 1e-12)
            fail("ZeroDenominator",
                 "mape undefined: actual value at index " + std::to_string(t) + " is zero");
        sum += std::abs(actual[t] - predicted[t]) / denom;
    }
    return sum / static_cast<double>(actual.size());
}

double mape_guarded(const std::vector<double>& actual, const std::vector<double>& predicted,
                    double eps) {
    check_same_length(actual.size(), predicted.size(), "mape");
    double sum = 0.0;
    for (std::size_t t = 0; t < actual.size(); ++t) {
        sum += std::abs(actual[t] - predicted[t]) / std::max(std::abs(actual[t]), eps);
    }
    return sum / static_cast<double>(actual.size());
}

double f1_binary(const BinVec& truth, const BinVec& predicted) {
    check_same_length(truth.bits.size(), predicted.bits.size(), "f1_binary");
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < truth.bits.size(); ++i) {
        const bool t = truth.bits[i] != 0;
        const bool p = predicted.bits[i] != 0;
        tp += (t && p);
        fp += (!t && p);
        fn += (t && !p);
    }
    if (tp == 0 && fp == 0 && fn == 0) return 1.0;  // nothing to find, nothing claimed
    if (tp == 0) return 0.0;
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    const double recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    return 2.0 * precision * recall / (precision + recall);
}

double pair_accuracy(const Matrix& truth, const Matrix& predicted) {
    const auto square_binary = [](const Matrix& m, const char* label) {
        if (m.rows != m.cols || m.rows < 2)
            fail("ShapeMismatch", std::string(label) + " must be square with d >= 2, got " +
                                      std::to_string(m.rows) + "x" + std::to_string(m.cols));
        for (const double v : m.data) {
            if (v != 0.0 && v != 1.0)
                fail("ShapeMismatch", std::string(label) + " entries must be 0 or 1");
        }
    };
    square_binary(truth, "truth matrix");
    square_binary(predicted, "predicted matrix");
    if (truth.rows != predicted.rows)
        fail("ShapeMismatch", "matrices differ in size: " + std::to_string(truth.rows) + " vs " +
                                  std::to_string(predicted.rows));
    const std::size_t d = truth.rows;
    std::size_t agree = 0;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            if (i == j) continue;
            agree += (truth.at(i, j) == predicted.at(i, j));
        }
    }
    return static_cast<double>(agree) / static_cast<double>(d * (d - 1));
}

}  // namespace tsreason
