#pragma once

#include "flowcast/core.hpp"
#include "flowcast/schedule.hpp"
#include "flowcast/stats/anova.hpp"
#include "flowcast/stats/ols.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace flowcast {

using WeekdaySet = std::vector<Weekday>;

/// "Mon-Thu" for a run of consecutive days, "Fri" for a single day,
/// "Mon+Wed" otherwise.
std::string group_label(std::span<const Weekday> group);
WeekdaySet parse_group_label(std::string_view label);

struct MergeEvidence
{
    WeekdaySet tested;
    /// Day main-effect p-value of the two-factor analysis over `tested`.
    double p_value = 1.0;
    bool merged = false;
};

struct DayGrouping
{
    std::vector<WeekdaySet> groups;
    double alpha = 0.05;
    std::vector<MergeEvidence> evidence;

    /// Index into `groups` of the group holding `day`, or -1.
    int group_index(Weekday day) const;
};

/// Throws InputError unless the groups are disjoint, non-empty, cover all
/// seven weekdays and each is a run of consecutive days.
void check_partition(const DayGrouping& grouping);

/// Balanced weekday x period sample from the non-flagged counts of `days`.
/// Each cell keeps its earliest r counts, r being the smallest cell size, so
/// the design stays balanced. Throws InputError listing cells with fewer than 2.
stats::FactorialSample<double> weekday_period_sample(std::span<const PeriodCount> counts, const WeekdaySet& days,
                                                    int period_count);

/// Greedy left-to-right merge over Mon..Sun.
///
/// The current group is tentatively extended with the next day and a
/// weekday x period analysis of variance is run over the extended set; the
/// merge is accepted when the weekday main-effect p-value is >= alpha.
/// Samples are built with weekday_period_sample.
DayGrouping discover_groups(std::span<const PeriodCount> counts, int period_count, double alpha = 0.05);

struct DateRange
{
    Date from;
    Date to;
};

struct RegressionModel
{
    WeekdaySet group;
    Direction direction = Direction::Outbound;
    std::string schedule_fingerprint;
    int period_count = 8;
    int reference_period = 8;
    stats::OlsFit<double> fit;
    /// Dates of the training counts; empty for models built from given parameters.
    std::optional<DateRange> trained;

    std::string label() const { return group_label(group); }
};

struct FitOptions
{
    bool exclude_flagged = true;
    /// Defaults to the last period.
    int reference_period = 0;
};

/// One dummy-variable regression per group over every count of the group's
/// weekdays in `direction`.
std::vector<RegressionModel> fit_models(std::span<const PeriodCount> counts, const DayGrouping& grouping,
                                        Direction direction, const PeriodSchedule& schedule,
                                        FitOptions options = {});

/// Model with the given parameters and no fit diagnostics; coefficients are
/// for periods 1..P in order, skipping the reference (last) period.
RegressionModel model_from_parameters(WeekdaySet group, Direction direction, const PeriodSchedule& schedule,
                                      double intercept, std::vector<double> coefficients);

/// intercept + coefficient of the period's indicator (intercept alone for the reference period).
double predict(const RegressionModel& model, int period_index);

struct ValidationEntry
{
    Date date;
    Weekday day_of_week = Weekday::Mon;
    int period_index = 1;
    double actual = 0.0;
    double predicted = 0.0;
    double ape_percent = 0.0;
};

struct ValidationReport
{
    std::vector<ValidationEntry> entries;
    double mean_ape_percent = 0.0;
    std::size_t skipped_zero_actual = 0;
};

/// 100 * |predicted - actual| / actual.
double absolute_percentage_error(double predicted, double actual);

/// Scores holdout counts against the model of their weekday's group and direction.
/// Zero actuals are skipped and counted; the mean is 0 when no entry remains.
ValidationReport validate(std::span<const RegressionModel> models, const DayGrouping& grouping,
                          std::span<const PeriodCount> holdout);

} // namespace flowcast
