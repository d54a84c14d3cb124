#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace konnect {

/// Calendar date of mixed precision: a year, a month of a year, or a day.
///
/// A partial date stands for the whole interval it covers, so 1895 is the
/// span [1895-01-01, 1895-12-31] and 1895-07 is [1895-07-01, 1895-07-31].
/// Ordering checks compare the earliest instant of start-like values with
/// the latest instant of end-like values.
struct PartialDate {
    std::int32_t year = 0;
    std::optional<std::uint8_t> month;
    std::optional<std::uint8_t> day;

    friend bool operator==(const PartialDate&, const PartialDate&) = default;

    /// Parses YYYY, YYYY-MM or YYYY-MM-DD with an optional leading '-' for
    /// BCE years. Returns nullopt on any malformed or impossible date.
    static std::optional<PartialDate> parse(std::string_view text);

    std::string to_string() const;

    /// Days since 1970-01-01 of the first day covered.
    std::int64_t earliest_day() const;
    /// Days since 1970-01-01 of the last day covered.
    std::int64_t latest_day() const;

    bool is_valid() const;
};

namespace date_detail {

constexpr bool is_leap(std::int64_t y)
{
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

constexpr unsigned days_in_month(std::int64_t y, unsigned m)
{
    constexpr unsigned table[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    return (m == 2 && is_leap(y)) ? 29u : table[m - 1];
}

// Proleptic Gregorian day count (H. Hinnant's days_from_civil).
constexpr std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d)
{
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline std::optional<int> parse_digits(std::string_view s, std::size_t width)
{
    if (s.size() != width) return std::nullopt;
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

}  // namespace date_detail

inline bool PartialDate::is_valid() const
{
    if (day && !month) return false;
    if (month && (*month < 1 || *month > 12)) return false;
    if (day && (*day < 1 || *day > date_detail::days_in_month(year, *month))) return false;
    return true;
}

inline std::optional<PartialDate> PartialDate::parse(std::string_view text)
{
    bool negative = false;
    if (!text.empty() && text.front() == '-') {
        negative = true;
        text.remove_prefix(1);
    }
    // Year is at least four digits; month and day are exactly two.
    const auto first_dash = text.find('-');
    const auto year_part = text.substr(0, first_dash);
    if (year_part.size() < 4 || year_part.size() > 9) return std::nullopt;
    auto year = date_detail::parse_digits(year_part, year_part.size());
    if (!year) return std::nullopt;

    PartialDate date;
    date.year = negative ? -*year : *year;
    if (first_dash != std::string_view::npos) {
        auto rest = text.substr(first_dash + 1);
        const auto dash = std::find(rest.begin(), rest.end(), '-');
        auto month = date_detail::parse_digits(std::string_view(rest.begin(), dash), 2);
        if (!month) return std::nullopt;
        date.month = static_cast<std::uint8_t>(*month);
        if (dash != rest.end()) {
            auto day = date_detail::parse_digits(std::string_view(dash + 1, rest.end()), 2);
            if (!day) return std::nullopt;
            date.day = static_cast<std::uint8_t>(*day);
        }
    }
    if (!date.is_valid()) return std::nullopt;
    return date;
}

inline std::string PartialDate::to_string() const
{
    std::string out;
    if (year < 0) out += '-';
    auto y = std::to_string(year < 0 ? -static_cast<std::int64_t>(year) : year);
    if (y.size() < 4) out.append(4 - y.size(), '0');
    out += y;
    auto two = [&out](unsigned v) {
        out += '-';
        out += static_cast<char>('0' + v / 10);
        out += static_cast<char>('0' + v % 10);
    };
    if (month) two(*month);
    if (day) two(*day);
    return out;
}

inline std::int64_t PartialDate::earliest_day() const
{
    return date_detail::days_from_civil(year, month.value_or(1), day.value_or(1));
}

inline std::int64_t PartialDate::latest_day() const
{
    const unsigned m = month.value_or(12);
    const unsigned d = day ? *day : date_detail::days_in_month(year, m);
    return date_detail::days_from_civil(year, m, d);
}

/// True when an interval starting at `start` may end at `end`.
inline bool ordered(const PartialDate& start, const PartialDate& end)
{
    return start.earliest_day() <= end.latest_day();
}

inline bool ordered(const std::optional<PartialDate>& start, const std::optional<PartialDate>& end)
{
    return !start || !end || ordered(*start, *end);
}

}  // namespace konnect
