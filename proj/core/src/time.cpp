#include "ehrgraph/time.hpp"

#include <array>
#include <cstdio>

namespace ehrgraph {
namespace {

// Days between 1970-01-01 and y-m-d in the proleptic Gregorian calendar
// (Howard Hinnant's civil-days algorithm).
std::int64_t days_from_civil(std::int64_t y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y += (m <= 2);
}

bool is_leap(std::int64_t y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

int days_in_month(std::int64_t y, int m) {
    static constexpr std::array<int, 12> lengths = {31, 28, 31, 30, 31, 30,
                                                    31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return lengths[static_cast<std::size_t>(m - 1)];
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

int to_int(std::string_view s) {
    int v = 0;
    for (char c : s) v = v * 10 + (c - '0');
    return v;
}

}  // namespace

Timestamp make_timestamp(int year, int month, int day, int hour, int minute, int second) {
    return Timestamp{days_from_civil(year, month, day) * kSecondsPerDay +
                     hour * kSecondsPerHour + minute * kSecondsPerMinute + second};
}

std::optional<ParsedTimestamp> parse_timestamp(std::string_view text) {
    const bool day_only = text.size() == 10;
    if (text.size() != 10 && text.size() != 19) return std::nullopt;
    if (text[4] != '-' || text[7] != '-') return std::nullopt;
    const std::string_view ys = text.substr(0, 4), ms = text.substr(5, 2), ds = text.substr(8, 2);
    if (!all_digits(ys) || !all_digits(ms) || !all_digits(ds)) return std::nullopt;
    int hour = 0, minute = 0, second = 0;
    if (!day_only) {
        if (text[10] != ' ' || text[13] != ':' || text[16] != ':') return std::nullopt;
        const std::string_view hs = text.substr(11, 2), mins = text.substr(14, 2),
                               ss = text.substr(17, 2);
        if (!all_digits(hs) || !all_digits(mins) || !all_digits(ss)) return std::nullopt;
        hour = to_int(hs);
        minute = to_int(mins);
        second = to_int(ss);
        if (hour > 23 || minute > 59 || second > 59) return std::nullopt;
    }
    const int year = to_int(ys), month = to_int(ms), day = to_int(ds);
    if (month < 1 || month > 12 || day < 1 || day > days_in_month(year, month)) {
        return std::nullopt;
    }
    return ParsedTimestamp{make_timestamp(year, month, day, hour, minute, second), day_only};
}

std::string format_timestamp(Timestamp ts) {
    std::int64_t days = ts.seconds / kSecondsPerDay;
    std::int64_t rem = ts.seconds % kSecondsPerDay;
    if (rem < 0) {
        rem += kSecondsPerDay;
        --days;
    }
    std::int64_t y;
    int m, d;
    civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04lld-%02d-%02d %02d:%02d:%02d",
                  static_cast<long long>(y), m, d, static_cast<int>(rem / kSecondsPerHour),
                  static_cast<int>(rem / kSecondsPerMinute % 60), static_cast<int>(rem % 60));
    return buf;
}

Timestamp start_of_day(Timestamp ts) {
    std::int64_t days = ts.seconds / kSecondsPerDay;
    if (ts.seconds % kSecondsPerDay < 0) --days;
    return Timestamp{days * kSecondsPerDay};
}

}  // namespace ehrgraph
