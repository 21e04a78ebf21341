#include "flowcast/core.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <limits>
#include <system_error>

namespace flowcast {

namespace {

constexpr std::array<std::string_view, kWeekdayCount> kWeekdayNames = {"Mon", "Tue", "Wed", "Thu",
                                                                       "Fri", "Sat", "Sun"};

bool all_digits(std::string_view text)
{
    for (char c : text)
        if (c < '0' || c > '9')
            return false;
    return !text.empty();
}

} // namespace

Date parse_date(std::string_view text)
{
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !all_digits(text.substr(0, 4)) ||
        !all_digits(text.substr(5, 2)) || !all_digits(text.substr(8, 2)))
        throw InputError("invalid date '" + std::string(text) + "' (expected YYYY-MM-DD)");
    const int y = parse_int(text.substr(0, 4));
    const int m = parse_int(text.substr(5, 2));
    const int d = parse_int(text.substr(8, 2));
    const Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                    std::chrono::day{static_cast<unsigned>(d)}};
    if (!date.ok())
        throw InputError("invalid calendar date '" + std::string(text) + "'");
    return date;
}

std::string format_date(const Date& date)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

Date add_days(const Date& date, int days)
{
    return Date{std::chrono::sys_days{date} + std::chrono::days{days}};
}

Weekday weekday_of(const Date& date)
{
    const std::chrono::weekday wd{std::chrono::sys_days{date}};
    return static_cast<Weekday>(wd.iso_encoding() - 1);
}

Weekday weekday_from_index(int index)
{
    if (index < 0 || index >= kWeekdayCount)
        throw InputError("weekday index out of range: " + std::to_string(index));
    return static_cast<Weekday>(index);
}

std::string_view to_string(Weekday day) { return kWeekdayNames[static_cast<std::size_t>(day)]; }

std::string_view to_string(Direction direction)
{
    return direction == Direction::Inbound ? "inbound" : "outbound";
}

std::string_view to_string(Quality quality)
{
    switch (quality) {
    case Quality::Observed: return "observed";
    case Quality::Imputed: return "imputed";
    case Quality::FlaggedEvent: return "flagged_event";
    }
    return "observed";
}

std::string_view to_string(DayType type)
{
    switch (type) {
    case DayType::Normal: return "normal";
    case DayType::Holiday: return "holiday";
    case DayType::SpecialEvent: return "special_event";
    }
    return "normal";
}

Weekday parse_weekday(std::string_view text)
{
    for (std::size_t i = 0; i < kWeekdayNames.size(); ++i)
        if (kWeekdayNames[i] == text)
            return static_cast<Weekday>(i);
    throw InputError("invalid day of week '" + std::string(text) + "' (expected Mon..Sun)");
}

Direction parse_direction(std::string_view text)
{
    if (text == "inbound")
        return Direction::Inbound;
    if (text == "outbound")
        return Direction::Outbound;
    throw InputError("invalid direction '" + std::string(text) + "' (expected inbound|outbound)");
}

Quality parse_quality(std::string_view text)
{
    if (text == "observed")
        return Quality::Observed;
    if (text == "imputed")
        return Quality::Imputed;
    if (text == "flagged_event")
        return Quality::FlaggedEvent;
    throw InputError("invalid quality '" + std::string(text) + "'");
}

DayType parse_day_type(std::string_view text)
{
    if (text == "normal")
        return DayType::Normal;
    if (text == "holiday")
        return DayType::Holiday;
    if (text == "special_event")
        return DayType::SpecialEvent;
    throw InputError("invalid day_type '" + std::string(text) + "' (expected normal|holiday|special_event)");
}

double round_half_up(double value, int decimals)
{
    // trim to 12 significant digits first so solver noise such as
    // 676.3749999999948 rounds like 676.375
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", std::abs(value));
    const double scale = std::pow(10.0, decimals);
    const double scaled = std::strtod(buf, nullptr) * scale;
    return std::copysign(std::floor(scaled + 0.5) / scale, value);
}

std::string format_fixed(double value, int decimals)
{
    if (!std::isfinite(value))
        return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
    char buf[64];
    double r = round_half_up(value, decimals);
    if (r == 0.0)
        r = 0.0; // drop negative zero
    std::snprintf(buf, sizeof buf, "%.*f", decimals, r);
    return buf;
}

std::string format_exact(double value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text)
{
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (res.ec != std::errc{} || res.ptr != end || text.empty())
        throw InputError("invalid number '" + std::string(text) + "'");
    return value;
}

int parse_int(std::string_view text)
{
    int value = 0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (res.ec != std::errc{} || res.ptr != end || text.empty())
        throw InputError("invalid integer '" + std::string(text) + "'");
    return value;
}

} // namespace flowcast
