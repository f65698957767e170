#include "tsreason/core/time_axis.hpp"

#include <array>
#include <cstdio>

#include "tsreason/core/error.hpp"

namespace tsreason {
namespace {

// Civil-date conversions on the proleptic Gregorian calendar (Hinnant's
// algorithm). Avoids timegm/gmtime so behavior does not depend on libc.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y += m <= 2;
}

bool all_digits(const char* s, int n) {
    for (int i = 0; i < n; ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
    }
    return true;
}

int to_int(const char* s, int n) {
    int v = 0;
    for (int i = 0; i < n; ++i) v = v * 10 + (s[i] - '0');
    return v;
}

}  // namespace

std::string format_iso8601(std::int64_t unix_seconds) {
    std::int64_t days = unix_seconds / 86400;
    std::int64_t rem = unix_seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    std::int64_t year;
    unsigned month, day;
    civil_from_days(days, year, month, day);
    const int hh = static_cast<int>(rem / 3600);
    const int mm = static_cast<int>((rem % 3600) / 60);
    const int ss = static_cast<int>(rem % 60);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02d:%02d:%02dZ",
                  static_cast<long long>(year), month, day, hh, mm, ss);
    return buf;
}

std::int64_t parse_iso8601(const std::string& text) {
    // Expected layout: YYYY-MM-DDTHH:MM:SSZ (20 chars).
    const char* s = text.c_str();
    const bool shape_ok =
        text.size() == 20 && s[4] == '-' && s[7] == '-' && (s[10] == 'T' || s[10] == ' ') &&
        s[13] == ':' && s[16] == ':' && s[19] == 'Z' && all_digits(s, 4) &&
        all_digits(s + 5, 2) && all_digits(s + 8, 2) && all_digits(s + 11, 2) &&
        all_digits(s + 14, 2) && all_digits(s + 17, 2);
    if (!shape_ok) fail("BadTimestamp", "expected ISO-8601 UTC timestamp, got '" + text + "'");
    const int year = to_int(s, 4);
    const int month = to_int(s + 5, 2);
    const int day = to_int(s + 8, 2);
    const int hh = to_int(s + 11, 2);
    const int mm = to_int(s + 14, 2);
    const int ss = to_int(s + 17, 2);
    if (month < 1 || month > 12 || day < 1 || day > 31 || hh > 23 || mm > 59 || ss > 60)
        fail("BadTimestamp", "out-of-range field in timestamp '" + text + "'");
    return days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day)) * 86400 +
           hh * 3600 + mm * 60 + ss;
}

}  // namespace tsreason
