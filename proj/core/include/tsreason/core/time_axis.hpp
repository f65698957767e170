#pragma once

#include <cstdint>
#include <string>

namespace tsreason {

/// Uniformly spaced time index shared by all points of a series: unix seconds
/// (UTC) plus a positive step. Plain integers keep serialization exact.
struct TimeAxis {
    std::int64_t start = 0;
    std::int64_t step_seconds = 3600;

    std::int64_t at(std::size_t i) const {
        return start + step_seconds * static_cast<std::int64_t>(i);
    }

    bool operator==(const TimeAxis&) const = default;
};

/// "2024-01-01T06:30:00Z". Only UTC with second precision is supported.
std::string format_iso8601(std::int64_t unix_seconds);

/// Inverse of format_iso8601; throws OpError("BadTimestamp") on malformed input.
std::int64_t parse_iso8601(const std::string& text);

}  // namespace tsreason
