#include "flowcast/ingest.hpp"

#include "csv.hpp"

#include <cmath>
#include <set>
#include <tuple>

namespace flowcast {

namespace {

using CountKey = std::tuple<std::chrono::sys_days, std::string, Direction, int, std::string>;

TapRecord parse_tap(const std::vector<std::string>& f, const csv::Reader& reader)
{
    if (f.size() != 4)
        throw reader.error("expected 4 fields, got " + std::to_string(f.size()));
    const std::string& ts = f[1];
    if (ts.size() != 19 || ts[10] != 'T')
        throw reader.error("unparsable timestamp '" + ts + "' (expected YYYY-MM-DDThh:mm:ss)");
    TapRecord tap;
    try {
        tap.station_id = f[0];
        tap.date = parse_date(std::string_view(ts).substr(0, 10));
        tap.seconds_of_day = parse_time_of_day(std::string_view(ts).substr(11));
        if (tap.seconds_of_day >= 86400)
            throw InputError("time of day out of range");
        tap.direction = parse_direction(f[2]);
        tap.source_id = f[3];
    } catch (const InputError& e) {
        throw reader.error("unparsable timestamp or field: " + std::string(e.what()));
    }
    if (tap.station_id.empty() || tap.source_id.empty())
        throw reader.error("empty station_id or source_id");
    return tap;
}

} // namespace

TapLoadResult load_taps(std::istream& in, const PeriodSchedule& schedule)
{
    csv::Reader reader(in);
    std::vector<std::string> f;
    TapLoadResult result;
    if (!reader.next(f))
        return result;
    if (!csv::header_is(f, {"station_id", "timestamp", "direction", "source_id"}))
        throw reader.error("expected header station_id,timestamp,direction,source_id");

    std::map<CountKey, double> sums;
    while (reader.next(f)) {
        const TapRecord tap = parse_tap(f, reader);
        ++result.taps;
        const auto period = schedule.period_at(tap.seconds_of_day);
        if (!period || !schedule.serves(weekday_of(tap.date))) {
            ++result.out_of_window;
            continue;
        }
        sums[{std::chrono::sys_days{tap.date}, tap.station_id, tap.direction, *period, tap.source_id}] += 1.0;
    }

    result.counts.reserve(sums.size());
    for (const auto& [key, total] : sums) {
        const auto& [day, station, direction, period, source] = key;
        PeriodCount c;
        c.date = Date{day};
        c.day_of_week = weekday_of(c.date);
        c.period_index = period;
        c.direction = direction;
        c.station_id = station;
        c.count = total;
        c.source_id = source;
        result.counts.push_back(std::move(c));
    }
    return result;
}

std::vector<PeriodCount> load_counts(std::istream& in, const PeriodSchedule& schedule)
{
    csv::Reader reader(in);
    std::vector<std::string> f;
    std::vector<PeriodCount> counts;
    if (!reader.next(f))
        return counts;
    bool with_quality = false;
    if (csv::header_is(f, {"date", "day_of_week", "period_index", "direction", "station_id", "count", "source_id",
                           "quality"}))
        with_quality = true;
    else if (!csv::header_is(f, {"date", "day_of_week", "period_index", "direction", "station_id", "count",
                                 "source_id"}))
        throw reader.error("expected header date,day_of_week,period_index,direction,station_id,count,source_id");
    const std::size_t width = with_quality ? 8 : 7;

    std::map<CountKey, int> first_line;
    std::string collisions;
    while (reader.next(f)) {
        if (f.size() != width)
            throw reader.error("expected " + std::to_string(width) + " fields, got " + std::to_string(f.size()));
        PeriodCount c;
        try {
            c.date = parse_date(f[0]);
            c.day_of_week = parse_weekday(f[1]);
            c.period_index = parse_int(f[2]);
            c.direction = parse_direction(f[3]);
            c.station_id = f[4];
            c.count = parse_double(f[5]);
            c.source_id = f[6];
            if (with_quality)
                c.quality = parse_quality(f[7]);
        } catch (const InputError& e) {
            throw reader.error(e.what());
        }
        if (c.day_of_week != weekday_of(c.date))
            throw reader.error("day_of_week " + f[1] + " inconsistent with date " + f[0]);
        if (!schedule.valid_period(c.period_index))
            throw reader.error("period_index " + f[2] + " out of range 1.." + std::to_string(schedule.period_count()));
        if (!std::isfinite(c.count) || c.count < 0)
            throw reader.error("count must be a non-negative number, got " + f[5]);

        const CountKey key{std::chrono::sys_days{c.date}, c.station_id, c.direction, c.period_index, c.source_id};
        const auto [it, inserted] = first_line.emplace(key, reader.line());
        if (!inserted) {
            collisions += "\n  duplicate key (" + f[0] + "," + f[2] + "," + f[3] + "," + f[4] + "," + f[6] +
                          ") at lines " + std::to_string(it->second) + " and " + std::to_string(reader.line());
            continue;
        }
        counts.push_back(std::move(c));
    }
    if (!collisions.empty())
        throw InputError("duplicate keys in counts:" + collisions);
    return counts;
}

void write_counts(std::ostream& out, std::span<const PeriodCount> counts)
{
    out << "date,day_of_week,period_index,direction,station_id,count,source_id,quality\n";
    for (const auto& c : counts)
        out << format_date(c.date) << ',' << to_string(c.day_of_week) << ',' << c.period_index << ','
            << to_string(c.direction) << ',' << c.station_id << ',' << format_exact(c.count) << ',' << c.source_id
            << ',' << to_string(c.quality) << '\n';
}

std::vector<CalendarLabel> load_labels(std::istream& in)
{
    csv::Reader reader(in);
    std::vector<std::string> f;
    std::vector<CalendarLabel> labels;
    if (!reader.next(f))
        return labels;
    if (!csv::header_is(f, {"date", "day_type"}))
        throw reader.error("expected header date,day_type");
    std::set<std::chrono::sys_days> seen;
    while (reader.next(f)) {
        if (f.size() != 2)
            throw reader.error("expected 2 fields, got " + std::to_string(f.size()));
        CalendarLabel label;
        try {
            label.date = parse_date(f[0]);
            label.day_type = parse_day_type(f[1]);
        } catch (const InputError& e) {
            throw reader.error(e.what());
        }
        if (!seen.insert(std::chrono::sys_days{label.date}).second)
            throw reader.error("date " + f[0] + " labeled more than once");
        labels.push_back(label);
    }
    return labels;
}

std::vector<PeriodCount> filter_normal(std::span<const PeriodCount> counts, std::span<const CalendarLabel> labels)
{
    std::map<std::chrono::sys_days, DayType> type_of;
    for (const auto& l : labels)
        if (!type_of.emplace(std::chrono::sys_days{l.date}, l.day_type).second)
            throw InputError("date " + format_date(l.date) + " labeled more than once");

    std::vector<PeriodCount> out;
    out.reserve(counts.size());
    for (const auto& c : counts) {
        const auto it = type_of.find(std::chrono::sys_days{c.date});
        if (it == type_of.end() || it->second == DayType::Normal)
            out.push_back(c);
    }
    return out;
}

std::vector<PeriodCount> fuse_sources(std::span<const PeriodCount> counts, const SourceWeights& weights)
{
    for (const auto& [source, w] : weights)
        if (!(w > 0.0) || !std::isfinite(w))
            throw InputError("weight for source '" + source + "' must be positive, got " + format_exact(w));

    using SlotKey = std::tuple<std::chrono::sys_days, int, Direction, std::string>;
    std::map<SlotKey, std::vector<std::size_t>> members;
    std::vector<SlotKey> order;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const auto& c = counts[i];
        SlotKey key{std::chrono::sys_days{c.date}, c.period_index, c.direction, c.station_id};
        auto& list = members[key];
        if (list.empty())
            order.push_back(key);
        for (std::size_t j : list)
            if (counts[j].source_id == c.source_id)
                throw InputError("source '" + c.source_id + "' reported twice for " + format_date(c.date) +
                                 " period " + std::to_string(c.period_index));
        list.push_back(i);
    }

    auto weight_of = [&](const std::string& source) {
        const auto it = weights.find(source);
        return it == weights.end() ? 1.0 : it->second;
    };

    std::vector<PeriodCount> out;
    out.reserve(order.size());
    for (const auto& key : order) {
        const auto& list = members[key];
        if (list.size() == 1) {
            out.push_back(counts[list.front()]);
            continue;
        }
        double num = 0.0, den = 0.0;
        for (std::size_t j : list) {
            const double w = weight_of(counts[j].source_id);
            num += w * counts[j].count;
            den += w;
        }
        PeriodCount fused = counts[list.front()];
        fused.count = num / den;
        fused.source_id = std::string(kFusedSource);
        out.push_back(std::move(fused));
    }
    return out;
}

} // namespace flowcast
