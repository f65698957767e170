#include "tsreason/core/time_series.hpp"

#include <cmath>

#include "tsreason/core/error.hpp"

namespace tsreason {

TimeSeries::TimeSeries(std::string name, TimeAxis axis, std::vector<double> values)
    : name_(std::move(name)), axis_(axis), values_(std::move(values)) {
    if (values_.empty()) fail("EmptySeries", "series '" + name_ + "' has no values");
    if (axis_.step_seconds <= 0)
        fail("BadAxis", "series '" + name_ + "' needs a positive step, got " +
                            std::to_string(axis_.step_seconds));
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]))
            fail("NonFiniteValue",
                 "series '" + name_ + "' has a non-finite value at index " + std::to_string(i));
    }
}

TimeSeries TimeSeries::with_values(std::vector<double> values) const {
    return TimeSeries(name_, axis_, std::move(values));
}

TimeSeries TimeSeries::renamed(std::string name) const {
    return TimeSeries(std::move(name), axis_, values_);
}

TimeSeries TimeSeries::slice(std::size_t offset, std::size_t count) const {
    if (offset + count > values_.size() || count == 0)
        fail("BadSlice", "slice [" + std::to_string(offset) + ", +" + std::to_string(count) +
                             ") out of range for series of length " + std::to_string(size()));
    TimeAxis axis = axis_;
    axis.start = axis_.at(offset);
    return TimeSeries(name_, axis,
                      std::vector<double>(values_.begin() + static_cast<std::ptrdiff_t>(offset),
                                          values_.begin() + static_cast<std::ptrdiff_t>(offset + count)));
}

TimeAxis TimeSeries::continuation_axis() const {
    TimeAxis axis = axis_;
    axis.start = axis_.at(values_.size());
    return axis;
}

Frame::Frame(std::vector<TimeSeries> columns) {
    for (auto& c : columns) add_column(std::move(c));
}

void Frame::add_column(TimeSeries column) {
    if (!columns_.empty()) {
        const TimeSeries& first = columns_.front();
        if (column.size() != first.size())
            fail("LengthMismatch", "column '" + column.name() + "' has length " +
                                       std::to_string(column.size()) + ", frame has " +
                                       std::to_string(first.size()));
        if (!(column.axis() == first.axis()))
            fail("AxisMismatch", "column '" + column.name() + "' is on a different time axis");
    }
    for (const auto& c : columns_) {
        if (c.name() == column.name())
            fail("DuplicateColumn", "frame already has a column named '" + column.name() + "'");
    }
    columns_.push_back(std::move(column));
}

const TimeSeries* Frame::find(const std::string& name) const {
    for (const auto& c : columns_) {
        if (c.name() == name) return &c;
    }
    return nullptr;
}

const TimeSeries& Frame::column(const std::string& name) const {
    if (const TimeSeries* c = find(name)) return *c;
    fail("UnknownColumn", "frame has no column named '" + name + "'");
}

const TimeAxis& Frame::axis() const {
    if (columns_.empty()) fail("EmptySeries", "frame has no columns");
    return columns_.front().axis();
}

std::vector<std::string> Frame::names() const {
    std::vector<std::string> out;
    out.reserve(columns_.size());
    for (const auto& c : columns_) out.push_back(c.name());
    return out;
}

}  // namespace tsreason
