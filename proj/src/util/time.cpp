#include "forge/util/time.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>

namespace forge::util {

TimestampMs now_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return a - floor_div(a, b) * b; }

}  // namespace

// Proleptic Gregorian conversions (Howard Hinnant's algorithms).
std::int64_t days_from_civil(CivilDate d) {
    std::int64_t y = d.year;
    y -= d.month <= 2;
    const std::int64_t era = floor_div(y, 400);
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (d.month + (d.month > 2 ? -3 : 9)) + 2) / 5 + d.day - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = floor_div(z, 146097);
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return CivilDate{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

TimestampMs civil_to_ms(CivilDateTime dt) {
    return days_from_civil(dt.date) * 86'400'000LL + dt.hour * 3'600'000LL + dt.minute * 60'000LL +
           dt.second * 1'000LL + dt.millisecond;
}

CivilDateTime ms_to_civil(TimestampMs ms) {
    std::int64_t days = floor_div(ms, 86'400'000LL);
    std::int64_t rem = floor_mod(ms, 86'400'000LL);
    CivilDateTime dt{};
    dt.date = civil_from_days(days);
    dt.hour = static_cast<int>(rem / 3'600'000);
    rem %= 3'600'000;
    dt.minute = static_cast<int>(rem / 60'000);
    rem %= 60'000;
    dt.second = static_cast<int>(rem / 1'000);
    dt.millisecond = static_cast<int>(rem % 1'000);
    return dt;
}

int weekday_monday0(std::int64_t days_since_epoch) {
    // 1970-01-01 was a Thursday.
    return static_cast<int>(floor_mod(days_since_epoch + 3, 7));
}

std::optional<TzOffset> TzOffset::parse(std::string_view spec) {
    if (spec == "UTC" || spec == "utc" || spec == "Z" || spec == "z" || spec.empty())
        return TzOffset{0};
    if (spec.size() < 3 || (spec[0] != '+' && spec[0] != '-')) return std::nullopt;
    int sign = spec[0] == '-' ? -1 : 1;
    std::string_view rest = spec.substr(1);
    int hh = 0, mm = 0;
    auto digits = [](std::string_view s) {
        for (char c : s)
            if (c < '0' || c > '9') return false;
        return !s.empty();
    };
    if (rest.size() == 5 && rest[2] == ':') {
        if (!digits(rest.substr(0, 2)) || !digits(rest.substr(3, 2))) return std::nullopt;
        hh = (rest[0] - '0') * 10 + (rest[1] - '0');
        mm = (rest[3] - '0') * 10 + (rest[4] - '0');
    } else if (rest.size() == 4 && digits(rest)) {
        hh = (rest[0] - '0') * 10 + (rest[1] - '0');
        mm = (rest[2] - '0') * 10 + (rest[3] - '0');
    } else if (rest.size() == 2 && digits(rest)) {
        hh = (rest[0] - '0') * 10 + (rest[1] - '0');
    } else {
        return std::nullopt;
    }
    if (hh > 14 || mm > 59) return std::nullopt;
    return TzOffset{sign * (hh * 60 + mm)};
}

std::string format_iso8601(TimestampMs ms) {
    CivilDateTime dt = ms_to_civil(ms);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", dt.date.year, dt.date.month,
                  dt.date.day, dt.hour, dt.minute, dt.second, dt.millisecond);
    return buf;
}

std::optional<TimestampMs> parse_iso8601(std::string_view text) {
    // Minimum: YYYY-MM-DD
    auto num = [&](std::size_t pos, std::size_t len, int& out) -> bool {
        if (pos + len > text.size()) return false;
        int v = 0;
        for (std::size_t i = pos; i < pos + len; ++i) {
            char c = text[i];
            if (c < '0' || c > '9') return false;
            v = v * 10 + (c - '0');
        }
        out = v;
        return true;
    };
    CivilDateTime dt{};
    if (!num(0, 4, dt.date.year)) return std::nullopt;
    if (text.size() < 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    if (!num(5, 2, dt.date.month) || !num(8, 2, dt.date.day)) return std::nullopt;
    if (dt.date.month < 1 || dt.date.month > 12 || dt.date.day < 1 || dt.date.day > 31) return std::nullopt;
    // round trip rejects days that overflow their month (2021-02-30)
    if (civil_from_days(days_from_civil(dt.date)) != dt.date) return std::nullopt;
    std::size_t pos = 10;
    if (pos == text.size()) return civil_to_ms(dt);
    if (text[pos] != 'T' && text[pos] != ' ') return std::nullopt;
    ++pos;
    if (!num(pos, 2, dt.hour)) return std::nullopt;
    if (pos + 5 > text.size() || text[pos + 2] != ':') return std::nullopt;
    if (!num(pos + 3, 2, dt.minute)) return std::nullopt;
    pos += 5;
    if (pos + 3 <= text.size() && text[pos] == ':') {
        if (!num(pos + 1, 2, dt.second)) return std::nullopt;
        pos += 3;
    }
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        std::size_t start = pos;
        std::int64_t frac = 0;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            if (pos - start < 3) frac = frac * 10 + (text[pos] - '0');
            ++pos;
        }
        std::size_t ndigits = pos - start;
        if (ndigits == 0) return std::nullopt;
        while (ndigits < 3) {
            frac *= 10;
            ++ndigits;
        }
        dt.millisecond = static_cast<int>(frac);
    }
    if (dt.hour > 23 || dt.minute > 59 || dt.second > 60) return std::nullopt;
    if (pos == text.size()) return civil_to_ms(dt);  // naive timestamps are taken as UTC
    auto tz = TzOffset::parse(text.substr(pos));
    if (!tz) return std::nullopt;
    return civil_to_ms(dt) - static_cast<TimestampMs>(tz->minutes) * 60'000;
}

std::string format_ical_utc(TimestampMs ms) {
    CivilDateTime dt = ms_to_civil(ms);
    char buf[24];
    std::snprintf(buf, sizeof buf, "%04d%02d%02dT%02d%02d%02dZ", dt.date.year, dt.date.month, dt.date.day,
                  dt.hour, dt.minute, dt.second);
    return buf;
}

std::string format_date(CivilDate d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

}  // namespace forge::util
