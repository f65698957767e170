#include "tsreason/core/num_text.hpp"

#include <charconv>
#include <cstdio>
#include <system_error>

#include "tsreason/core/error.hpp"

namespace tsreason {

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string format_fixed(double value, int places) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", places, value);
    return buf;
}

double parse_double(std::string_view text) {
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        fail("BadNumber", "not a number: '" + std::string(text) + "'");
    return value;
}

std::int64_t parse_int(std::string_view text) {
    std::int64_t value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        fail("BadNumber", "not an integer: '" + std::string(text) + "'");
    return value;
}

}  // namespace tsreason
