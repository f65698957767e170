#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tsreason/core/time_axis.hpp"

namespace tsreason {

/// Regularly sampled univariate series. Construction validates that values
/// are non-empty and finite and that the axis step is positive; operators can
/// therefore assume well-formed inputs.
class TimeSeries {
public:
    TimeSeries() = default;
    TimeSeries(std::string name, TimeAxis axis, std::vector<double> values);

    const std::string& name() const noexcept { return name_; }
    const TimeAxis& axis() const noexcept { return axis_; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double front() const { return values_.front(); }
    double back() const { return values_.back(); }

    /// Same name and axis, new values (must keep the invariant).
    TimeSeries with_values(std::vector<double> values) const;
    TimeSeries renamed(std::string name) const;
    /// Contiguous sub-series; the axis start shifts accordingly.
    TimeSeries slice(std::size_t offset, std::size_t count) const;
    /// Axis continuation directly after this series (for forecasts).
    TimeAxis continuation_axis() const;

    bool operator==(const TimeSeries&) const = default;

private:
    std::string name_;
    TimeAxis axis_;
    std::vector<double> values_;
};

/// Named columns over one shared axis. Columns have equal length, identical
/// axes and unique names. A frame may have zero columns (degenerate but legal,
/// e.g. "no covariates").
class Frame {
public:
    Frame() = default;
    explicit Frame(std::vector<TimeSeries> columns);

    void add_column(TimeSeries column);

    const std::vector<TimeSeries>& columns() const noexcept { return columns_; }
    std::size_t n_cols() const noexcept { return columns_.size(); }
    std::size_t n_rows() const noexcept { return columns_.empty() ? 0 : columns_.front().size(); }
    bool empty() const noexcept { return columns_.empty(); }

    const TimeSeries* find(const std::string& name) const;
    /// Throws OpError("UnknownColumn") when absent.
    const TimeSeries& column(const std::string& name) const;
    const TimeSeries& column(std::size_t i) const { return columns_[i]; }
    /// Axis of the shared index; requires at least one column.
    const TimeAxis& axis() const;
    std::vector<std::string> names() const;

    bool operator==(const Frame&) const = default;

private:
    std::vector<TimeSeries> columns_;
};

}  // namespace tsreason
