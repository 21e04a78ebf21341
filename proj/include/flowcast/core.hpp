#pragma once

#include <chrono>
#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>

namespace flowcast {

// ---------------------------------------------------------------------------
// Errors. InputError maps to CLI exit code 2, NumericalError to exit code 3.
// ---------------------------------------------------------------------------

class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed, inconsistent or missing input data.
class InputError : public Error
{
  public:
    using Error::Error;
};

/// A computation could not produce a meaningful result.
class NumericalError : public Error
{
  public:
    using Error::Error;
};

/// Some design column has no observations (e.g. an unobserved period).
class RankDeficientError : public NumericalError
{
  public:
    using NumericalError::NumericalError;
};

/// A continued fraction failed to reach its tolerance within the iteration cap.
class ConvergenceError : public NumericalError
{
  public:
    using NumericalError::NumericalError;
};

// ---------------------------------------------------------------------------
// Calendar and categorical domain types
// ---------------------------------------------------------------------------

using Date = std::chrono::year_month_day;

enum class Weekday { Mon = 0, Tue, Wed, Thu, Fri, Sat, Sun };

inline constexpr int kWeekdayCount = 7;

enum class Direction { Inbound, Outbound };

enum class Quality { Observed, Imputed, FlaggedEvent };

enum class DayType { Normal, Holiday, SpecialEvent };

/// Parses "YYYY-MM-DD"; throws InputError on anything else.
Date parse_date(std::string_view text);
std::string format_date(const Date& date);
Date add_days(const Date& date, int days);

Weekday weekday_of(const Date& date);
Weekday weekday_from_index(int index);
inline int index_of(Weekday day) { return static_cast<int>(day); }

std::string_view to_string(Weekday day);
std::string_view to_string(Direction direction);
std::string_view to_string(Quality quality);
std::string_view to_string(DayType type);

Weekday parse_weekday(std::string_view text);
Direction parse_direction(std::string_view text);
Quality parse_quality(std::string_view text);
DayType parse_day_type(std::string_view text);

/// One observed (or repaired) passenger count for a single period slot.
struct PeriodCount
{
    Date date;
    Weekday day_of_week = Weekday::Mon;
    int period_index = 1;
    Direction direction = Direction::Outbound;
    std::string station_id;
    double count = 0.0;
    std::string source_id;
    Quality quality = Quality::Observed;

    bool operator==(const PeriodCount&) const = default;
};

/// Rounds half away from zero at the given number of decimals after trimming
/// to 12 significant digits; display only.
double round_half_up(double value, int decimals);

/// Fixed-point rendering after round_half_up.
std::string format_fixed(double value, int decimals);

/// Shortest decimal representation that parses back to the same double.
std::string format_exact(double value);

/// Strict double parse of the whole string; throws InputError.
double parse_double(std::string_view text);
int parse_int(std::string_view text);

} // namespace flowcast
