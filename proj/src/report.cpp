#include "flowcast/report.hpp"

#include <algorithm>
#include <map>

namespace flowcast {

std::vector<DailyTotal> daily_totals(std::span<const PeriodCount> counts)
{
    std::map<std::chrono::sys_days, double> totals;
    for (const auto& c : counts)
        totals[std::chrono::sys_days{c.date}] += c.count;
    std::vector<DailyTotal> out;
    out.reserve(totals.size());
    for (const auto& [day, total] : totals) {
        const Date date{day};
        out.push_back(DailyTotal{date, weekday_of(date), total});
    }
    return out;
}

std::vector<ProfileRow> period_profile(std::span<const PeriodCount> counts, std::span<const RegressionModel> models)
{
    std::vector<ProfileRow> out;
    for (const auto& model : models) {
        std::vector<double> sum(static_cast<std::size_t>(model.period_count) + 1, 0.0);
        std::vector<std::size_t> n(sum.size(), 0);
        for (const auto& c : counts) {
            if (c.direction != model.direction || c.period_index < 1 || c.period_index > model.period_count)
                continue;
            if (std::find(model.group.begin(), model.group.end(), c.day_of_week) == model.group.end())
                continue;
            sum[static_cast<std::size_t>(c.period_index)] += c.count;
            ++n[static_cast<std::size_t>(c.period_index)];
        }
        for (int p = 1; p <= model.period_count; ++p) {
            const auto i = static_cast<std::size_t>(p);
            out.push_back(ProfileRow{model.label(), p, n[i], n[i] ? sum[i] / static_cast<double>(n[i]) : 0.0,
                                     predict(model, p)});
        }
    }
    return out;
}

} // namespace flowcast
