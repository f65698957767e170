#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace tsreason {

/// Shortest decimal text that parses back to exactly the same double
/// (std::to_chars general form). Used everywhere a number must round-trip:
/// CSV cells, plan serialization, JSON-free text formats.
std::string format_double(double value);

/// Fixed-point rendering with `places` digits after the point, e.g. question
/// templates render constraint values with 4 places ("694.4796").
std::string format_fixed(double value, int places);

/// Strict full-string parse; throws OpError("BadNumber") on trailing garbage.
double parse_double(std::string_view text);

std::int64_t parse_int(std::string_view text);

}  // namespace tsreason
