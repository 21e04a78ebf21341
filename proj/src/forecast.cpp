#include "flowcast/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace flowcast {

std::string group_label(std::span<const Weekday> group)
{
    if (group.empty())
        return "";
    bool consecutive = true;
    for (std::size_t i = 1; i < group.size(); ++i)
        consecutive = consecutive && index_of(group[i]) == index_of(group[i - 1]) + 1;
    if (group.size() == 1)
        return std::string(to_string(group.front()));
    if (consecutive)
        return std::string(to_string(group.front())) + "-" + std::string(to_string(group.back()));
    std::string out;
    for (Weekday d : group)
        out += (out.empty() ? "" : "+") + std::string(to_string(d));
    return out;
}

WeekdaySet parse_group_label(std::string_view label)
{
    WeekdaySet out;
    if (label.size() == 7 && label[3] == '-') {
        const int from = index_of(parse_weekday(label.substr(0, 3)));
        const int to = index_of(parse_weekday(label.substr(4, 3)));
        if (to <= from)
            throw InputError("invalid weekday range '" + std::string(label) + "'");
        for (int i = from; i <= to; ++i)
            out.push_back(weekday_from_index(i));
        return out;
    }
    std::size_t start = 0;
    while (start <= label.size()) {
        const auto pos = label.find('+', start);
        out.push_back(parse_weekday(label.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

int DayGrouping::group_index(Weekday day) const
{
    for (std::size_t g = 0; g < groups.size(); ++g)
        if (std::find(groups[g].begin(), groups[g].end(), day) != groups[g].end())
            return static_cast<int>(g);
    return -1;
}

void check_partition(const DayGrouping& grouping)
{
    std::set<Weekday> seen;
    for (const auto& g : grouping.groups) {
        if (g.empty())
            throw InputError("day grouping contains an empty group");
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (!seen.insert(g[i]).second)
                throw InputError(std::string("weekday ") + std::string(to_string(g[i])) + " appears in two groups");
            if (i > 0 && index_of(g[i]) != index_of(g[i - 1]) + 1)
                throw InputError("group " + group_label(g) + " is not a run of consecutive weekdays");
        }
    }
    if (seen.size() != kWeekdayCount)
        throw InputError("day grouping does not cover all seven weekdays");
}

namespace {

void require_single_series(std::span<const PeriodCount> counts)
{
    if (counts.empty())
        throw InputError("no counts supplied");
    for (const auto& c : counts)
        if (c.direction != counts.front().direction || c.station_id != counts.front().station_id)
            throw InputError("counts must be pre-filtered to one station and one direction");
}

} // namespace

stats::FactorialSample<double> weekday_period_sample(std::span<const PeriodCount> counts, const WeekdaySet& days,
                                                    int period_count)
{
    if (period_count < 2)
        throw InputError("need at least 2 periods");
    if (days.size() < 2)
        throw InputError("weekday x period analysis needs at least 2 weekdays");

    using Cell = std::vector<std::pair<std::chrono::sys_days, double>>;
    std::vector<std::vector<Cell>> cells(days.size(), std::vector<Cell>(static_cast<std::size_t>(period_count)));
    for (const auto& c : counts) {
        if (c.quality == Quality::FlaggedEvent)
            continue;
        const auto it = std::find(days.begin(), days.end(), c.day_of_week);
        if (it == days.end())
            continue;
        if (c.period_index < 1 || c.period_index > period_count)
            throw InputError("period_index " + std::to_string(c.period_index) + " outside schedule");
        cells[static_cast<std::size_t>(it - days.begin())][static_cast<std::size_t>(c.period_index - 1)].emplace_back(
            std::chrono::sys_days{c.date}, c.count);
    }

    std::size_t r = std::numeric_limits<std::size_t>::max();
    std::string short_cells;
    for (std::size_t i = 0; i < days.size(); ++i)
        for (std::size_t p = 0; p < cells[i].size(); ++p) {
            auto& cell = cells[i][p];
            std::sort(cell.begin(), cell.end());
            r = std::min(r, cell.size());
            if (cell.size() < 2)
                short_cells += "\n  " + std::string(to_string(days[i])) + " period " + std::to_string(p + 1) + ": " +
                               std::to_string(cell.size()) + " replicate(s)";
        }
    if (!short_cells.empty())
        throw InputError("insufficient replicates (need >= 2 per weekday-period cell):" + short_cells);

    stats::FactorialSample<double>::Cells values(static_cast<Eigen::Index>(days.size()) * period_count,
                                                 static_cast<Eigen::Index>(r));
    for (std::size_t i = 0; i < days.size(); ++i)
        for (std::size_t p = 0; p < cells[i].size(); ++p)
            for (std::size_t k = 0; k < r; ++k)
                values(static_cast<Eigen::Index>(i * cells[i].size() + p), static_cast<Eigen::Index>(k)) =
                    cells[i][p][k].second;
    return stats::FactorialSample<double>(static_cast<Eigen::Index>(days.size()), period_count, std::move(values));
}

DayGrouping discover_groups(std::span<const PeriodCount> counts, int period_count, double alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0))
        throw InputError("alpha must lie in (0, 1)");
    require_single_series(counts);

    WeekdaySet week;
    for (int d = 0; d < kWeekdayCount; ++d)
        week.push_back(weekday_from_index(d));
    // surfaces every short cell of the week up front
    weekday_period_sample(counts, week, period_count);

    DayGrouping grouping;
    grouping.alpha = alpha;
    WeekdaySet current{Weekday::Mon};
    for (int d = 1; d < kWeekdayCount; ++d) {
        WeekdaySet tested = current;
        tested.push_back(weekday_from_index(d));
        const auto table = stats::two_way_anova(weekday_period_sample(counts, tested, period_count));
        const double p = *table.factor_a.p;
        const bool merge = p >= alpha;
        grouping.evidence.push_back(MergeEvidence{tested, p, merge});
        if (merge) {
            current = std::move(tested);
        } else {
            grouping.groups.push_back(std::move(current));
            current = WeekdaySet{weekday_from_index(d)};
        }
    }
    grouping.groups.push_back(std::move(current));
    return grouping;
}

std::vector<RegressionModel> fit_models(std::span<const PeriodCount> counts, const DayGrouping& grouping,
                                        Direction direction, const PeriodSchedule& schedule, FitOptions options)
{
    const int periods = schedule.period_count();
    const int reference = options.reference_period == 0 ? periods : options.reference_period;
    if (!schedule.valid_period(reference))
        throw InputError("reference period " + std::to_string(reference) + " outside schedule");

    std::vector<RegressionModel> models;
    for (const auto& group : grouping.groups) {
        std::vector<double> y;
        std::vector<int> period_of;
        std::optional<std::chrono::sys_days> first, last;
        for (const auto& c : counts) {
            if (c.direction != direction || std::find(group.begin(), group.end(), c.day_of_week) == group.end())
                continue;
            if (options.exclude_flagged && c.quality == Quality::FlaggedEvent)
                continue;
            if (!schedule.valid_period(c.period_index))
                throw InputError("period_index " + std::to_string(c.period_index) + " outside schedule");
            y.push_back(c.count);
            period_of.push_back(c.period_index);
            const std::chrono::sys_days day{c.date};
            first = first ? std::min(*first, day) : day;
            last = last ? std::max(*last, day) : day;
        }

        const stats::DummyDesign design(period_of, periods, reference);
        const auto sizes = design.category_sizes();
        for (int p = 1; p <= periods; ++p)
            if (sizes[static_cast<std::size_t>(p)] == 0)
                throw RankDeficientError("rank-deficient design for group " + group_label(group) + " (" +
                                         std::string(to_string(direction)) + "): period " + std::to_string(p) +
                                         " has no observations");

        RegressionModel model;
        model.group = group;
        model.direction = direction;
        model.schedule_fingerprint = schedule.fingerprint();
        model.period_count = periods;
        model.reference_period = reference;
        model.fit = stats::ols_dummy_fit(y, design);
        model.trained = DateRange{Date{*first}, Date{*last}};
        models.push_back(std::move(model));
    }
    return models;
}

RegressionModel model_from_parameters(WeekdaySet group, Direction direction, const PeriodSchedule& schedule,
                                      double intercept, std::vector<double> coefficients)
{
    if (static_cast<int>(coefficients.size()) != schedule.period_count() - 1)
        throw InputError("expected " + std::to_string(schedule.period_count() - 1) + " coefficients, got " +
                         std::to_string(coefficients.size()));
    RegressionModel model;
    model.group = std::move(group);
    model.direction = direction;
    model.schedule_fingerprint = schedule.fingerprint();
    model.period_count = schedule.period_count();
    model.reference_period = model.period_count;
    model.fit.intercept = intercept;
    model.fit.coefficients = Eigen::Map<const Eigen::VectorXd>(coefficients.data(),
                                                               static_cast<Eigen::Index>(coefficients.size()));
    model.fit.coef_stats.resize(coefficients.size());
    model.fit.df_regression = model.period_count - 1;
    return model;
}

double predict(const RegressionModel& model, int period_index)
{
    if (period_index < 1 || period_index > model.period_count)
        throw InputError("period " + std::to_string(period_index) + " out of range 1.." +
                         std::to_string(model.period_count));
    if (period_index == model.reference_period)
        return model.fit.intercept;
    const int col = period_index < model.reference_period ? period_index - 1 : period_index - 2;
    return model.fit.intercept + model.fit.coefficients(col);
}

double absolute_percentage_error(double predicted, double actual)
{
    if (actual == 0.0)
        throw InputError("APE undefined for a zero actual value");
    return 100.0 * std::abs(predicted - actual) / std::abs(actual);
}

ValidationReport validate(std::span<const RegressionModel> models, const DayGrouping& grouping,
                          std::span<const PeriodCount> holdout)
{
    ValidationReport report;
    double sum = 0.0;
    for (const auto& row : holdout) {
        const int g = grouping.group_index(row.day_of_week);
        const RegressionModel* model = nullptr;
        if (g >= 0) {
            const auto& group = grouping.groups[static_cast<std::size_t>(g)];
            for (const auto& m : models)
                if (m.direction == row.direction && m.group == group) {
                    model = &m;
                    break;
                }
        }
        if (!model)
            throw InputError("no " + std::string(to_string(row.direction)) + " model covers " +
                             std::string(to_string(row.day_of_week)) + " (holdout date " + format_date(row.date) +
                             ")");
        if (row.count == 0.0) {
            ++report.skipped_zero_actual;
            continue;
        }
        ValidationEntry e;
        e.date = row.date;
        e.day_of_week = row.day_of_week;
        e.period_index = row.period_index;
        e.actual = row.count;
        e.predicted = predict(*model, row.period_index);
        e.ape_percent = absolute_percentage_error(e.predicted, e.actual);
        sum += e.ape_percent;
        report.entries.push_back(e);
    }
    if (!report.entries.empty())
        report.mean_ape_percent = sum / static_cast<double>(report.entries.size());
    return report;
}

} // namespace flowcast
