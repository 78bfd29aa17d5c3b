#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace forge::util {

// Milliseconds since the Unix epoch, UTC.
using TimestampMs = std::int64_t;

TimestampMs now_ms();

struct CivilDate {
    int year;
    int month;  // 1..12
    int day;    // 1..31

    auto operator<=>(const CivilDate&) const = default;
};

struct CivilDateTime {
    CivilDate date;
    int hour;
    int minute;
    int second;
    int millisecond;
};

// Days since 1970-01-01 for a proleptic Gregorian date, and back.
std::int64_t days_from_civil(CivilDate d);
CivilDate civil_from_days(std::int64_t days);

TimestampMs civil_to_ms(CivilDateTime dt);
CivilDateTime ms_to_civil(TimestampMs ms);

// 0 = Monday .. 6 = Sunday.
int weekday_monday0(std::int64_t days_since_epoch);

// Fixed-offset timezone. Accepts "UTC", "Z", "+HH:MM", "-HH:MM", "+HHMM".
// IANA zone names are not supported; offsets are enough for the engine's
// localization of punchcards, heatmaps and deadlines.
struct TzOffset {
    int minutes = 0;

    static std::optional<TzOffset> parse(std::string_view spec);
    TimestampMs to_local(TimestampMs utc) const { return utc + static_cast<TimestampMs>(minutes) * 60'000; }
};

// "2026-08-22T17:56:03.123Z" (always milliseconds, always UTC).
std::string format_iso8601(TimestampMs ms);

// Accepts "YYYY-MM-DDTHH:MM:SS[.mmm](Z|±HH:MM)" and date-only "YYYY-MM-DD".
std::optional<TimestampMs> parse_iso8601(std::string_view text);

// "20260822T175603Z" — the iCalendar UTC form, second precision.
std::string format_ical_utc(TimestampMs ms);

// "2026-08-22"
std::string format_date(CivilDate d);

}  // namespace forge::util
