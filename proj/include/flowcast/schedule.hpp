#pragma once

#include "flowcast/core.hpp"

#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace flowcast {

/// Seconds since local midnight; "24:00" is 86400.
int parse_time_of_day(std::string_view text);
std::string format_time_of_day(int seconds);

/// Partition of the service day into indexed half-open intervals [start, end).
///
/// Periods are numbered from 1. The interval boundaries are configuration: the
/// bundled sample schedule is illustrative only.
class PeriodSchedule
{
  public:
    PeriodSchedule(std::vector<int> boundaries_seconds, std::set<Weekday> service_days);

    /// Eight intervals over 06:00-24:00, every weekday served.
    static PeriodSchedule default_schedule();

    int period_count() const { return static_cast<int>(boundaries_.size()) - 1; }
    std::span<const int> boundaries() const { return boundaries_; }
    const std::set<Weekday>& service_days() const { return service_days_; }

    bool serves(Weekday day) const { return service_days_.contains(day); }
    bool valid_period(int period_index) const { return period_index >= 1 && period_index <= period_count(); }

    /// 1-based index of the interval containing the time of day, if any.
    std::optional<int> period_at(int seconds_of_day) const;

    /// Stable 16-hex-digit FNV-1a hash of the canonical schedule text.
    std::string fingerprint() const;

    bool operator==(const PeriodSchedule&) const = default;

  private:
    std::vector<int> boundaries_;
    std::set<Weekday> service_days_;
};

PeriodSchedule schedule_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const PeriodSchedule& schedule);
PeriodSchedule load_schedule(const std::filesystem::path& path);

} // namespace flowcast
