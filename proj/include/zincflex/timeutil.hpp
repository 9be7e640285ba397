#pragma once

// Minimal UTC calendar helpers: ISO-8601 parsing/formatting and civil-date
// arithmetic. All timestamps are Unix seconds, all days are UTC days.

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace zincflex {

constexpr std::int64_t kSecondsPerMinute = 60;
constexpr std::int64_t kSecondsPerHour = 3600;
constexpr std::int64_t kSecondsPerDay = 86400;

struct CivilDate {
    int year = 1970;
    unsigned month = 1;
    unsigned day = 1;

    auto operator<=>(const CivilDate&) const = default;
};

// Days since 1970-01-01 for a civil date (proleptic Gregorian).
inline std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline CivilDate civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return CivilDate{static_cast<int>(y + (m <= 2)), m, d};
}

inline std::int64_t timestamp_from_civil(const CivilDate& date) {
    return days_from_civil(date.year, date.month, date.day) * kSecondsPerDay;
}

inline CivilDate civil_from_timestamp(std::int64_t ts) {
    std::int64_t days = ts / kSecondsPerDay;
    if (ts < 0 && ts % kSecondsPerDay != 0) --days;
    return civil_from_days(days);
}

// Parses "YYYY-MM-DD".
inline CivilDate parse_date(const std::string& text) {
    int y = 0;
    unsigned m = 0, d = 0;
    if (std::sscanf(text.c_str(), "%d-%u-%u", &y, &m, &d) != 3 || m < 1 || m > 12 || d < 1 ||
        d > 31) {
        throw std::domain_error("invalid date '" + text + "', expected YYYY-MM-DD");
    }
    return CivilDate{y, m, d};
}

// Parses "YYYY-MM-DDTHH:MM:SSZ" (strict UTC) or a bare date, into Unix seconds.
inline std::int64_t parse_timestamp(const std::string& text) {
    int y = 0;
    unsigned mo = 0, d = 0, h = 0, mi = 0, s = 0;
    char tz = '\0';
    const int n =
        std::sscanf(text.c_str(), "%d-%u-%uT%u:%u:%u%c", &y, &mo, &d, &h, &mi, &s, &tz);
    if (n == 7 && tz == 'Z' && mo >= 1 && mo <= 12 && d >= 1 && d <= 31 && h < 24 && mi < 60 &&
        s < 60) {
        return days_from_civil(y, mo, d) * kSecondsPerDay + h * kSecondsPerHour +
               mi * kSecondsPerMinute + s;
    }
    if (n == 3) {
        return timestamp_from_civil(parse_date(text));
    }
    throw std::domain_error("invalid timestamp '" + text + "', expected ISO-8601 UTC");
}

inline std::string format_timestamp(std::int64_t ts) {
    const CivilDate date = civil_from_timestamp(ts);
    std::int64_t rem = ts - timestamp_from_civil(date);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", date.year, date.month,
                  date.day, static_cast<long long>(rem / kSecondsPerHour),
                  static_cast<long long>(rem % kSecondsPerHour / kSecondsPerMinute),
                  static_cast<long long>(rem % kSecondsPerMinute));
    return buf;
}

inline std::string format_date(const CivilDate& date) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", date.year, date.month, date.day);
    return buf;
}

} // namespace zincflex
