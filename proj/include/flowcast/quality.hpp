#pragma once

#include "flowcast/core.hpp"
#include "flowcast/ingest.hpp"
#include "flowcast/schedule.hpp"

#include <compare>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace flowcast {

/// One (date, direction, period) slot of a single station's series.
struct SlotKey
{
    Date date;
    Direction direction = Direction::Outbound;
    int period_index = 1;
    std::string station_id;

    auto operator<=>(const SlotKey&) const = default;
    bool operator==(const SlotKey&) const = default;
};

SlotKey slot_of(const PeriodCount& count);

/// Cells that should hold exactly one count: every served date in
/// [first, last] x directions x periods, for one station.
struct ExpectedGrid
{
    Date first;
    Date last;
    PeriodSchedule schedule = PeriodSchedule::default_schedule();
    std::vector<Direction> directions{Direction::Outbound};
    std::string station_id;

    void validate() const;
    std::vector<SlotKey> slots() const;
};

/// Grid slots with no count, sorted by (date, direction, period).
std::vector<SlotKey> detect_missing(std::span<const PeriodCount> counts, const ExpectedGrid& grid);

enum class AnomalyClass { EquipmentFailure, TrafficEvent };
std::string_view to_string(AnomalyClass c);

struct Anomaly
{
    SlotKey key;
    Weekday day_of_week = Weekday::Mon;
    double observed = 0.0;
    double robust_z = 0.0;
    AnomalyClass classification = AnomalyClass::EquipmentFailure;
};

/// (weekday, period, direction, station): the history pool for robust statistics.
struct HistoryCell
{
    Weekday day_of_week = Weekday::Mon;
    int period_index = 1;
    Direction direction = Direction::Outbound;
    std::string station_id;
    std::size_t observations = 0;

    auto operator<=>(const HistoryCell&) const = default;
};

struct AnomalyThresholds
{
    double k_fail = 4.0;
    double k_corroborate = 2.0;
};

inline constexpr double kMadScale = 1.4826;
inline constexpr double kMadEpsilon = 1e-9;
inline constexpr std::size_t kMinHistory = 4;

struct AnomalyScan
{
    std::vector<Anomaly> anomalies;
    /// Cells skipped because they hold fewer than kMinHistory counts.
    std::vector<HistoryCell> insufficient_history;
};

/// Robust z-score screening against each (weekday, period) cell's median and MAD.
///
/// z = (x - median) / (1.4826 * MAD + 1e-9). |z| > k_fail makes a candidate; a
/// candidate is a traffic event when an adjacent period of the same date and
/// direction has |z| > k_corroborate with the same sign, otherwise an equipment
/// failure. All counts of a cell feed its statistics; imputed counts are never
/// candidates. Anomalies are sorted by slot.
AnomalyScan classify_anomalies(std::span<const PeriodCount> counts, AnomalyThresholds thresholds = {});

/// Method tag carried by imputation records.
inline constexpr std::string_view kCellMeanMethod = "cell_mean";
/// Source id carried by imputed counts.
inline constexpr std::string_view kImputedSource = "imputed";

/// Replacement counts for `targets`: mean of the clean history of the target's
/// (weekday, period, direction, station) cell. Clean means quality observed
/// and not itself a target. Throws InputError listing every target without
/// clean history.
std::vector<PeriodCount> impute(std::span<const PeriodCount> counts, std::span<const SlotKey> targets);

struct Imputation
{
    SlotKey key;
    double value = 0.0;
    std::string method;
};

struct QualityReport
{
    std::vector<SlotKey> missing;
    std::vector<Anomaly> anomalies;
    std::vector<Imputation> imputations;
    std::vector<HistoryCell> insufficient_history;

    std::size_t equipment_failures() const;
};

struct CleanResult
{
    std::vector<PeriodCount> counts;
    QualityReport report;
};

/// Filters non-normal dates, then missing detection -> anomaly classification -> repair.
///
/// Kept counts retain input order; equipment failures are replaced in place by
/// their imputations, traffic events are kept with quality flagged_event, and
/// imputations for missing slots are appended in slot order.
CleanResult clean_pipeline(std::span<const PeriodCount> counts, const ExpectedGrid& grid,
                           std::span<const CalendarLabel> labels, AnomalyThresholds thresholds = {});

nlohmann::json to_json(const QualityReport& report);

} // namespace flowcast
