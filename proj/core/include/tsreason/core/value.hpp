#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "tsreason/core/time_series.hpp"

namespace tsreason {

/// Integer index list (e.g. spike positions).
struct IntVec {
    std::vector<std::int64_t> values;
    bool operator==(const IntVec&) const = default;
};

/// 0/1 mask, e.g. per-step anomaly flags. Entries are validated on use sites
/// that construct from untrusted input.
struct BinVec {
    std::vector<std::uint8_t> bits;
    std::size_t count_ones() const;
    bool operator==(const BinVec&) const = default;
};

/// Dense row-major matrix of doubles.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    static Matrix zeros(std::size_t r, std::size_t c) { return Matrix{r, c, std::vector<double>(r * c, 0.0)}; }
    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    bool operator==(const Matrix&) const = default;
};

/// Outcome of a statistical hypothesis test. `verdict` is the
/// domain-level reading at significance 0.05 (test-specific: stationary,
/// trend-stationary, same distribution, white noise).
struct TestResult {
    std::string kind;
    double statistic = 0.0;
    double p_value = 1.0;
    bool verdict = false;
    bool operator==(const TestResult&) const = default;
};

/// Reference to a fitted model. Carries the AR coefficients directly so the
/// handle stays a value: reusable by forecasting and residual scoring without
/// a shared store.
struct ModelHandle {
    std::string id;
    double intercept = 0.0;
    std::vector<double> coeffs;  // phi_1..phi_p
    bool operator==(const ModelHandle&) const = default;
};

/// Free-form text value (distinct type so the variant stays unambiguous).
struct Text {
    std::string value;
    bool operator==(const Text&) const = default;
};

/// Anything a plan variable can hold: every operator consumes and produces
/// Values, and the executor's environment maps names to them.
class Value {
public:
    enum class Kind { scalar, series, frame, int_vec, bin_vec, matrix, text, test_result, model_handle };

    Value() : v_(0.0) {}
    Value(double scalar) : v_(scalar) {}
    Value(TimeSeries s) : v_(std::move(s)) {}
    Value(Frame f) : v_(std::move(f)) {}
    Value(IntVec v) : v_(std::move(v)) {}
    Value(BinVec v) : v_(std::move(v)) {}
    Value(Matrix m) : v_(std::move(m)) {}
    Value(Text t) : v_(std::move(t)) {}
    Value(TestResult t) : v_(std::move(t)) {}
    Value(ModelHandle h) : v_(std::move(h)) {}

    Kind kind() const { return static_cast<Kind>(v_.index()); }
    bool is(Kind k) const { return kind() == k; }
    static const char* kind_name(Kind k);
    const char* kind_name() const { return kind_name(kind()); }

    // Checked accessors; throw OpError("TypeMismatch") naming both kinds.
    double scalar() const;
    const TimeSeries& series() const;
    const Frame& frame() const;
    const IntVec& int_vec() const;
    const BinVec& bin_vec() const;
    const Matrix& matrix() const;
    const Text& text() const;
    const TestResult& test_result() const;
    const ModelHandle& model_handle() const;

    /// Compact human-readable shape, e.g. "series[240]" or "matrix[4x4]".
    std::string shape_string() const;

    bool operator==(const Value&) const = default;

private:
    std::variant<double, TimeSeries, Frame, IntVec, BinVec, Matrix, Text, TestResult, ModelHandle> v_;
};

Value::Kind value_kind_from_string(const std::string& name);

}  // namespace tsreason
