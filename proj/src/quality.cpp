#include "flowcast/quality.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace flowcast {

namespace {

double median_of(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

HistoryCell cell_of(const PeriodCount& c)
{
    return HistoryCell{c.day_of_week, c.period_index, c.direction, c.station_id, 0};
}

HistoryCell cell_of(const SlotKey& k)
{
    return HistoryCell{weekday_of(k.date), k.period_index, k.direction, k.station_id, 0};
}

nlohmann::json slot_json(const SlotKey& k)
{
    return {{"date", format_date(k.date)},
            {"period_index", k.period_index},
            {"direction", to_string(k.direction)},
            {"station_id", k.station_id}};
}

std::string describe(const SlotKey& k)
{
    return format_date(k.date) + "/" + std::string(to_string(k.direction)) + "/period " +
           std::to_string(k.period_index) + (k.station_id.empty() ? "" : "/" + k.station_id);
}

} // namespace

SlotKey slot_of(const PeriodCount& c) { return SlotKey{c.date, c.direction, c.period_index, c.station_id}; }

void ExpectedGrid::validate() const
{
    if (!first.ok() || !last.ok() || std::chrono::sys_days{last} < std::chrono::sys_days{first})
        throw InputError("expected grid date range is empty");
    if (directions.empty())
        throw InputError("expected grid needs at least one direction");
}

std::vector<SlotKey> ExpectedGrid::slots() const
{
    validate();
    std::vector<SlotKey> out;
    std::set<Direction> dirs(directions.begin(), directions.end());
    for (auto d = std::chrono::sys_days{first}; d <= std::chrono::sys_days{last}; d += std::chrono::days{1}) {
        const Date date{d};
        if (!schedule.serves(weekday_of(date)))
            continue;
        for (Direction dir : dirs)
            for (int p = 1; p <= schedule.period_count(); ++p)
                out.push_back(SlotKey{date, dir, p, station_id});
    }
    return out;
}

std::vector<SlotKey> detect_missing(std::span<const PeriodCount> counts, const ExpectedGrid& grid)
{
    std::set<SlotKey> present;
    for (const auto& c : counts)
        if (c.station_id == grid.station_id)
            present.insert(slot_of(c));
    std::vector<SlotKey> missing;
    for (auto& slot : grid.slots())
        if (!present.contains(slot))
            missing.push_back(std::move(slot));
    return missing;
}

std::string_view to_string(AnomalyClass c)
{
    return c == AnomalyClass::EquipmentFailure ? "equipment_failure" : "traffic_event";
}

AnomalyScan classify_anomalies(std::span<const PeriodCount> counts, AnomalyThresholds thresholds)
{
    if (!(thresholds.k_fail > 0.0) || !(thresholds.k_corroborate > 0.0))
        throw InputError("anomaly thresholds must be positive");

    std::map<SlotKey, std::size_t> index_of_slot;
    std::map<HistoryCell, std::vector<double>> history;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const auto& c = counts[i];
        if (!index_of_slot.emplace(slot_of(c), i).second)
            throw InputError("slot " + describe(slot_of(c)) +
                             " appears more than once; fuse sources before anomaly screening");
        history[cell_of(c)].push_back(c.count);
    }

    struct Robust
    {
        double median;
        double scale;
    };
    std::map<HistoryCell, Robust> robust;
    AnomalyScan scan;
    for (const auto& [cell, values] : history) {
        if (values.size() < kMinHistory) {
            HistoryCell reported = cell;
            reported.observations = values.size();
            scan.insufficient_history.push_back(reported);
            continue;
        }
        const double med = median_of(values);
        std::vector<double> dev;
        dev.reserve(values.size());
        for (double v : values)
            dev.push_back(std::abs(v - med));
        robust.emplace(cell, Robust{med, kMadScale * median_of(std::move(dev)) + kMadEpsilon});
    }

    std::map<SlotKey, double> z_of;
    for (const auto& c : counts) {
        const auto it = robust.find(cell_of(c));
        if (it != robust.end())
            z_of.emplace(slot_of(c), (c.count - it->second.median) / it->second.scale);
    }

    auto corroborated = [&](const SlotKey& key, double z) {
        for (int delta : {-1, 1}) {
            SlotKey neighbour = key;
            neighbour.period_index += delta;
            const auto it = z_of.find(neighbour);
            if (it == z_of.end())
                continue;
            if (std::abs(it->second) > thresholds.k_corroborate && std::signbit(it->second) == std::signbit(z))
                return true;
        }
        return false;
    };

    for (const auto& [key, z] : z_of) {
        const auto& c = counts[index_of_slot.at(key)];
        if (c.quality == Quality::Imputed || !(std::abs(z) > thresholds.k_fail))
            continue;
        scan.anomalies.push_back(Anomaly{key, c.day_of_week, c.count, z,
                                         corroborated(key, z) ? AnomalyClass::TrafficEvent
                                                              : AnomalyClass::EquipmentFailure});
    }
    return scan;
}

std::vector<PeriodCount> impute(std::span<const PeriodCount> counts, std::span<const SlotKey> targets)
{
    const std::set<SlotKey> target_set(targets.begin(), targets.end());
    std::map<HistoryCell, std::pair<double, std::size_t>> clean;
    for (const auto& c : counts) {
        if (c.quality != Quality::Observed || target_set.contains(slot_of(c)))
            continue;
        auto& [sum, n] = clean[cell_of(c)];
        sum += c.count;
        ++n;
    }

    std::vector<PeriodCount> out;
    std::string unresolved;
    for (const auto& key : targets) {
        const auto it = clean.find(cell_of(key));
        if (it == clean.end() || it->second.second == 0) {
            unresolved += "\n  " + describe(key);
            continue;
        }
        PeriodCount c;
        c.date = key.date;
        c.day_of_week = weekday_of(key.date);
        c.period_index = key.period_index;
        c.direction = key.direction;
        c.station_id = key.station_id;
        c.count = it->second.first / static_cast<double>(it->second.second);
        c.source_id = std::string(kImputedSource);
        c.quality = Quality::Imputed;
        out.push_back(std::move(c));
    }
    if (!unresolved.empty())
        throw InputError("unresolvable imputation targets (no clean history in their cell):" + unresolved);
    return out;
}

std::size_t QualityReport::equipment_failures() const
{
    return static_cast<std::size_t>(std::count_if(anomalies.begin(), anomalies.end(), [](const Anomaly& a) {
        return a.classification == AnomalyClass::EquipmentFailure;
    }));
}

CleanResult clean_pipeline(std::span<const PeriodCount> counts, const ExpectedGrid& grid,
                           std::span<const CalendarLabel> labels, AnomalyThresholds thresholds)
{
    grid.validate();
    const std::vector<PeriodCount> normal = filter_normal(counts, labels);

    std::set<std::chrono::sys_days> excluded_dates;
    for (const auto& l : labels)
        if (l.day_type != DayType::Normal)
            excluded_dates.insert(std::chrono::sys_days{l.date});

    CleanResult result;
    auto& report = result.report;
    for (auto& key : detect_missing(normal, grid))
        if (!excluded_dates.contains(std::chrono::sys_days{key.date}))
            report.missing.push_back(std::move(key));

    AnomalyScan scan = classify_anomalies(normal, thresholds);
    report.anomalies = std::move(scan.anomalies);
    report.insufficient_history = std::move(scan.insufficient_history);

    std::set<SlotKey> failures, events;
    for (const auto& a : report.anomalies)
        (a.classification == AnomalyClass::EquipmentFailure ? failures : events).insert(a.key);

    std::set<SlotKey> target_set(report.missing.begin(), report.missing.end());
    target_set.insert(failures.begin(), failures.end());
    const std::vector<SlotKey> targets(target_set.begin(), target_set.end());
    std::vector<PeriodCount> screened = normal;
    for (auto& c : screened)
        if (events.contains(slot_of(c)))
            c.quality = Quality::FlaggedEvent;
    const std::vector<PeriodCount> repaired = impute(screened, targets);

    std::map<SlotKey, const PeriodCount*> repair_of;
    for (const auto& c : repaired) {
        repair_of.emplace(slot_of(c), &c);
        report.imputations.push_back(Imputation{slot_of(c), c.count, std::string(kCellMeanMethod)});
    }

    result.counts.reserve(normal.size() + report.missing.size());
    for (auto& c : screened) {
        const SlotKey key = slot_of(c);
        result.counts.push_back(failures.contains(key) ? *repair_of.at(key) : std::move(c));
    }
    for (const auto& key : report.missing)
        result.counts.push_back(*repair_of.at(key));
    return result;
}

nlohmann::json to_json(const QualityReport& report)
{
    nlohmann::json doc;
    auto& missing = doc["missing"] = nlohmann::json::array();
    for (const auto& k : report.missing)
        missing.push_back(slot_json(k));

    auto& anomalies = doc["anomalies"] = nlohmann::json::array();
    for (const auto& a : report.anomalies) {
        auto row = slot_json(a.key);
        row["day_of_week"] = to_string(a.day_of_week);
        row["observed"] = a.observed;
        row["robust_z"] = a.robust_z;
        row["classification"] = to_string(a.classification);
        anomalies.push_back(std::move(row));
    }

    auto& imputations = doc["imputations"] = nlohmann::json::array();
    for (const auto& imp : report.imputations) {
        auto row = slot_json(imp.key);
        row["value"] = imp.value;
        row["method"] = imp.method;
        imputations.push_back(std::move(row));
    }

    auto& skipped = doc["insufficient_history"] = nlohmann::json::array();
    for (const auto& cell : report.insufficient_history)
        skipped.push_back({{"day_of_week", to_string(cell.day_of_week)},
                           {"period_index", cell.period_index},
                           {"direction", to_string(cell.direction)},
                           {"station_id", cell.station_id},
                           {"observations", cell.observations}});
    return doc;
}

} // namespace flowcast
