#pragma once

#include "flowcast/core.hpp"
#include "flowcast/schedule.hpp"

#include <cstddef>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace flowcast {

/// One raw fare-collection event.
struct TapRecord
{
    std::string station_id;
    Date date;
    int seconds_of_day = 0;
    Direction direction = Direction::Outbound;
    std::string source_id;
};

struct TapLoadResult
{
    std::vector<PeriodCount> counts;
    std::size_t taps = 0;
    /// Taps whose time falls outside every interval, or on a day the schedule does not serve.
    std::size_t out_of_window = 0;
};

/// Buckets taps (CSV `station_id,timestamp,direction,source_id`) into period counts.
///
/// Counts are summed per (date, period, direction, station, source) and returned
/// sorted by that key. Every tap is accounted for: taps + nothing else equals
/// the summed counts plus `out_of_window`.
TapLoadResult load_taps(std::istream& in, const PeriodSchedule& schedule);

/// Reads pre-aggregated counts (CSV `date,day_of_week,period_index,direction,station_id,count,source_id`
/// with an optional trailing `quality` column). Duplicate keys are rejected with
/// both line numbers; all collisions are listed in one error.
std::vector<PeriodCount> load_counts(std::istream& in, const PeriodSchedule& schedule);

/// Writes the counts CSV including the `quality` column, with doubles printed
/// at round-trip precision.
void write_counts(std::ostream& out, std::span<const PeriodCount> counts);

struct CalendarLabel
{
    Date date;
    DayType day_type = DayType::Normal;
};

/// CSV `date,day_type`; each date at most once.
std::vector<CalendarLabel> load_labels(std::istream& in);

/// Keeps counts whose date is labeled normal (unlabeled dates are normal). Order preserved.
std::vector<PeriodCount> filter_normal(std::span<const PeriodCount> counts, std::span<const CalendarLabel> labels);

using SourceWeights = std::map<std::string, double, std::less<>>;

/// Source id carried by rows produced from several sources.
inline constexpr std::string_view kFusedSource = "fused";

/// Weighted mean of multi-source readings of the same slot: sum(w*c) / sum(w).
/// Sources absent from `weights` weigh 1. Single-source slots pass through unchanged.
/// Output keeps the order of each slot's first occurrence.
std::vector<PeriodCount> fuse_sources(std::span<const PeriodCount> counts, const SourceWeights& weights);

} // namespace flowcast
