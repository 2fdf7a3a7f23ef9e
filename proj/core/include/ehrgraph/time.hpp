#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ehrgraph {

// Calendar instant with second precision in a timezone-free proleptic
// Gregorian calendar, stored as seconds relative to 1970-01-01 00:00:00.
// De-identified records routinely use shifted years (2100+), so the value
// range is wide.
struct Timestamp {
    std::int64_t seconds = 0;

    friend constexpr bool operator==(const Timestamp&, const Timestamp&) = default;
    friend constexpr auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

inline constexpr std::int64_t kSecondsPerMinute = 60;
inline constexpr std::int64_t kSecondsPerHour = 3600;
inline constexpr std::int64_t kSecondsPerDay = 86400;

struct ParsedTimestamp {
    Timestamp value;
    bool day_only = false;  // input carried a date but no time of day
};

// Accepts "YYYY-MM-DD HH:MM:SS" or "YYYY-MM-DD". Returns nullopt for
// anything else, including out-of-range calendar fields.
std::optional<ParsedTimestamp> parse_timestamp(std::string_view text);

Timestamp make_timestamp(int year, int month, int day,
                         int hour = 0, int minute = 0, int second = 0);

// "YYYY-MM-DD HH:MM:SS"
std::string format_timestamp(Timestamp ts);

// Midnight of the day containing ts.
Timestamp start_of_day(Timestamp ts);

}  // namespace ehrgraph
