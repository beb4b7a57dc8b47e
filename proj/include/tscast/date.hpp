#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include "tscast/errors.hpp"

namespace tscast {

/// Calendar date (proleptic Gregorian). Trading series only need ordering,
/// ISO formatting, and weekday arithmetic, so this stays minimal.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    // Days since 1970-01-01 (Howard Hinnant's civil-days algorithm).
    [[nodiscard]] std::int64_t to_days() const {
        const int y = year - (month <= 2);
        const int era = (y >= 0 ? y : y - 399) / 400;
        const unsigned yoe = static_cast<unsigned>(y - era * 400);
        const unsigned doy =
            (153u * static_cast<unsigned>(month + (month > 2 ? -3 : 9)) + 2) / 5 +
            static_cast<unsigned>(day) - 1;
        const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
        return static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) - 719468;
    }

    static Date from_days(std::int64_t z) {
        z += 719468;
        const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
        const unsigned doe = static_cast<unsigned>(z - era * 146097);
        const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
        const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
        const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
        const unsigned mp = (5 * doy + 2) / 153;
        const unsigned d = doy - (153 * mp + 2) / 5 + 1;
        const unsigned m = mp + (mp < 10 ? 3 : -9);
        return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
    }

    // 0 = Monday .. 6 = Sunday
    [[nodiscard]] int weekday() const {
        const std::int64_t z = to_days();
        return static_cast<int>(((z % 7) + 10) % 7);
    }

    [[nodiscard]] bool is_weekend() const { return weekday() >= 5; }

    [[nodiscard]] std::string to_string() const {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
        return buf;
    }
};

inline Date parse_date(std::string_view text) {
    auto bad = [&] { throw FormatError("invalid ISO date: '" + std::string(text) + "'"); };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') bad();
    Date d;
    auto parse_int = [&](std::string_view part, int& out) {
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
        if (ec != std::errc{} || ptr != part.data() + part.size()) bad();
    };
    parse_int(text.substr(0, 4), d.year);
    parse_int(text.substr(5, 2), d.month);
    parse_int(text.substr(8, 2), d.day);
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31) bad();
    return d;
}

/// Next trading date after `d`: skips Saturdays and Sundays, no holiday calendar.
inline Date next_trading_day(Date d) {
    std::int64_t z = d.to_days();
    do {
        ++z;
        d = Date::from_days(z);
    } while (d.is_weekend());
    return d;
}

}  // namespace tscast
