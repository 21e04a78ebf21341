#include "flowcast/schedule.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>

namespace flowcast {

int parse_time_of_day(std::string_view text)
{
    // HH:MM or HH:MM:SS
    auto bad = [&] { return InputError("invalid time of day '" + std::string(text) + "'"); };
    if (text.size() != 5 && text.size() != 8)
        throw bad();
    if (text[2] != ':' || (text.size() == 8 && text[5] != ':'))
        throw bad();
    int h = 0, m = 0, s = 0;
    try {
        h = parse_int(text.substr(0, 2));
        m = parse_int(text.substr(3, 2));
        if (text.size() == 8)
            s = parse_int(text.substr(6, 2));
    } catch (const InputError&) {
        throw bad();
    }
    if (m > 59 || s > 59 || h > 24 || (h == 24 && (m != 0 || s != 0)))
        throw bad();
    return h * 3600 + m * 60 + s;
}

std::string format_time_of_day(int seconds)
{
    char buf[16];
    if (seconds % 60 == 0)
        std::snprintf(buf, sizeof buf, "%02d:%02d", seconds / 3600, (seconds / 60) % 60);
    else
        std::snprintf(buf, sizeof buf, "%02d:%02d:%02d", seconds / 3600, (seconds / 60) % 60, seconds % 60);
    return buf;
}

PeriodSchedule::PeriodSchedule(std::vector<int> boundaries_seconds, std::set<Weekday> service_days)
    : boundaries_(std::move(boundaries_seconds)), service_days_(std::move(service_days))
{
    if (boundaries_.size() < 3)
        throw InputError("schedule needs at least 2 periods (3 boundaries)");
    for (std::size_t i = 1; i < boundaries_.size(); ++i)
        if (boundaries_[i] <= boundaries_[i - 1])
            throw InputError("schedule boundaries must be strictly increasing");
    if (boundaries_.front() < 0 || boundaries_.back() > 86400)
        throw InputError("schedule boundaries must lie within 00:00-24:00");
    if (service_days_.empty())
        throw InputError("schedule must serve at least one weekday");
}

PeriodSchedule PeriodSchedule::default_schedule()
{
    std::vector<int> b;
    for (const char* t : {"06:00", "07:00", "09:00", "11:00", "14:00", "17:00", "19:00", "21:00", "24:00"})
        b.push_back(parse_time_of_day(t));
    std::set<Weekday> days;
    for (int i = 0; i < kWeekdayCount; ++i)
        days.insert(weekday_from_index(i));
    return PeriodSchedule(std::move(b), std::move(days));
}

std::optional<int> PeriodSchedule::period_at(int seconds_of_day) const
{
    if (seconds_of_day < boundaries_.front() || seconds_of_day >= boundaries_.back())
        return std::nullopt;
    const auto it = std::upper_bound(boundaries_.begin(), boundaries_.end(), seconds_of_day);
    return static_cast<int>(it - boundaries_.begin());
}

std::string PeriodSchedule::fingerprint() const
{
    std::string canon = std::to_string(period_count()) + "|";
    for (int b : boundaries_)
        canon += format_time_of_day(b) + ",";
    canon += "|";
    for (Weekday d : service_days_)
        canon += std::string(to_string(d)) + ",";

    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

PeriodSchedule schedule_from_json(const nlohmann::json& doc)
{
    try {
        std::vector<int> b;
        for (const auto& t : doc.at("boundaries"))
            b.push_back(parse_time_of_day(t.get<std::string>()));
        std::set<Weekday> days;
        if (doc.contains("service_days")) {
            for (const auto& d : doc.at("service_days"))
                days.insert(parse_weekday(d.get<std::string>()));
        } else {
            for (int i = 0; i < kWeekdayCount; ++i)
                days.insert(weekday_from_index(i));
        }
        PeriodSchedule schedule(std::move(b), std::move(days));
        if (doc.contains("period_count") && doc.at("period_count").get<int>() != schedule.period_count())
            throw InputError("schedule period_count " + doc.at("period_count").dump() + " does not match " +
                             std::to_string(schedule.boundaries().size()) + " boundaries");
        return schedule;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("invalid schedule: ") + e.what());
    }
}

nlohmann::json to_json(const PeriodSchedule& schedule)
{
    nlohmann::json doc;
    doc["period_count"] = schedule.period_count();
    auto& b = doc["boundaries"] = nlohmann::json::array();
    for (int s : schedule.boundaries())
        b.push_back(format_time_of_day(s));
    auto& days = doc["service_days"] = nlohmann::json::array();
    for (Weekday d : schedule.service_days())
        days.push_back(to_string(d));
    return doc;
}

PeriodSchedule load_schedule(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open schedule file: " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("cannot parse schedule file " + path.string() + ": " + e.what());
    }
    return schedule_from_json(doc);
}

} // namespace flowcast
