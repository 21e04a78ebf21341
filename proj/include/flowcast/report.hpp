#pragma once

// Planning aggregates over cleaned counts.

#include "flowcast/forecast.hpp"

#include <span>
#include <string>
#include <vector>

namespace flowcast {

struct DailyTotal
{
    Date date;
    Weekday day_of_week = Weekday::Mon;
    double total = 0.0;
};

/// Sum of all counts per date, ascending by date.
std::vector<DailyTotal> daily_totals(std::span<const PeriodCount> counts);

struct ProfileRow
{
    std::string group;
    int period_index = 1;
    std::size_t observations = 0;
    double observed_mean = 0.0;
    double predicted = 0.0;
};

/// Per-(group, period) observed means next to the group model's prediction.
/// Rows follow model order, then period order.
std::vector<ProfileRow> period_profile(std::span<const PeriodCount> counts,
                                       std::span<const RegressionModel> models);

} // namespace flowcast
