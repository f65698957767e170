#pragma once

#include <filesystem>
#include <string>

#include "tsreason/core/time_series.hpp"

namespace tsreason::csv {

// On-disk format: header row required, first column "timestamp" (ISO-8601
// UTC), remaining columns numeric. Values are written shortest-round-trip so
// read(write(x)) == x exactly.

std::string to_string(const Frame& frame);
std::string to_string(const TimeSeries& series);

Frame frame_from_string(const std::string& text, const std::string& origin = "<string>");
TimeSeries series_from_string(const std::string& text, const std::string& origin = "<string>");

void write_frame(const std::filesystem::path& path, const Frame& frame);
void write_series(const std::filesystem::path& path, const TimeSeries& series);

Frame read_frame(const std::filesystem::path& path);
/// Requires exactly one value column.
TimeSeries read_series(const std::filesystem::path& path);

}  // namespace tsreason::csv
