#include "tsreason/core/value.hpp"

#include "tsreason/core/error.hpp"

namespace tsreason {

std::size_t BinVec::count_ones() const {
    std::size_t n = 0;
    for (const auto b : bits) n += (b != 0);
    return n;
}

const char* Value::kind_name(Kind k) {
    switch (k) {
        case Kind::scalar: return "scalar";
        case Kind::series: return "series";
        case Kind::frame: return "frame";
        case Kind::int_vec: return "int_vec";
        case Kind::bin_vec: return "bin_vec";
        case Kind::matrix: return "matrix";
        case Kind::text: return "text";
        case Kind::test_result: return "test_result";
        case Kind::model_handle: return "model_handle";
    }
    return "unknown";
}

Value::Kind value_kind_from_string(const std::string& name) {
    for (int k = 0; k <= static_cast<int>(Value::Kind::model_handle); ++k) {
        if (name == Value::kind_name(static_cast<Value::Kind>(k))) return static_cast<Value::Kind>(k);
    }
    fail("BadValueKind", "unknown value kind '" + name + "'");
}

namespace {
[[noreturn]] void wrong_kind(const Value& v, Value::Kind want) {
    fail("TypeMismatch", std::string("expected ") + Value::kind_name(want) + ", got " + v.kind_name());
}
}  // namespace

double Value::scalar() const {
    if (const auto* p = std::get_if<double>(&v_)) return *p;
    wrong_kind(*this, Kind::scalar);
}
const TimeSeries& Value::series() const {
    if (const auto* p = std::get_if<TimeSeries>(&v_)) return *p;
    wrong_kind(*this, Kind::series);
}
const Frame& Value::frame() const {
    if (const auto* p = std::get_if<Frame>(&v_)) return *p;
    wrong_kind(*this, Kind::frame);
}
const IntVec& Value::int_vec() const {
    if (const auto* p = std::get_if<IntVec>(&v_)) return *p;
    wrong_kind(*this, Kind::int_vec);
}
const BinVec& Value::bin_vec() const {
    if (const auto* p = std::get_if<BinVec>(&v_)) return *p;
    wrong_kind(*this, Kind::bin_vec);
}
const Matrix& Value::matrix() const {
    if (const auto* p = std::get_if<Matrix>(&v_)) return *p;
    wrong_kind(*this, Kind::matrix);
}
const Text& Value::text() const {
    if (const auto* p = std::get_if<Text>(&v_)) return *p;
    wrong_kind(*this, Kind::text);
}
const TestResult& Value::test_result() const {
    if (const auto* p = std::get_if<TestResult>(&v_)) return *p;
    wrong_kind(*this, Kind::test_result);
}
const ModelHandle& Value::model_handle() const {
    if (const auto* p = std::get_if<ModelHandle>(&v_)) return *p;
    wrong_kind(*this, Kind::model_handle);
}

std::string Value::shape_string() const {
    switch (kind()) {
        case Kind::scalar: return "scalar";
        case Kind::series: return "series[" + std::to_string(series().size()) + "]";
        case Kind::frame:
            return "frame[" + std::to_string(frame().n_rows()) + "x" + std::to_string(frame().n_cols()) + "]";
        case Kind::int_vec: return "int_vec[" + std::to_string(int_vec().values.size()) + "]";
        case Kind::bin_vec: return "bin_vec[" + std::to_string(bin_vec().bits.size()) + "]";
        case Kind::matrix:
            return "matrix[" + std::to_string(matrix().rows) + "x" + std::to_string(matrix().cols) + "]";
        case Kind::text: return "text";
        case Kind::test_result: return "test_result";
        case Kind::model_handle: return "model_handle";
    }
    return "unknown";
}

}  // namespace tsreason
