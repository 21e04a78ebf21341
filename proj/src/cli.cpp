#include "flowcast/cli.hpp"

#include "flowcast/forecast.hpp"
#include "flowcast/ingest.hpp"
#include "flowcast/model_io.hpp"
#include "flowcast/quality.hpp"
#include "flowcast/report.hpp"
#include "flowcast/schedule.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace flowcast::cli {

namespace fs = std::filesystem;

namespace {

struct Globals
{
    std::string schedule;
    std::string direction = "outbound";
    std::string station;
    std::string out;
    std::string format = "json";
    double alpha = 0.05;
    double k_fail = 4.0;
    double k_corroborate = 2.0;
};

std::string sci(double v)
{
    if (!std::isfinite(v))
        return format_fixed(v, 0);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::ifstream open_input(const std::string& path, const std::string& what)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open " + what + " file: " + path);
    return in;
}

PeriodSchedule require_schedule(const Globals& g)
{
    if (g.schedule.empty())
        throw InputError("--schedule is required for this command");
    return load_schedule(g.schedule);
}

std::string require_out(const Globals& g)
{
    if (g.out.empty())
        throw InputError("--out is required for this command");
    return g.out;
}

fs::path output_dir(const Globals& g)
{
    const fs::path dir = require_out(g);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (!fs::is_directory(dir))
        throw InputError("output directory is not writable: " + dir.string());
    return dir;
}

std::vector<PeriodCount> read_counts(const std::string& path, const PeriodSchedule& schedule)
{
    auto in = open_input(path, "counts");
    try {
        return load_counts(in, schedule);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

std::vector<CalendarLabel> read_labels(const std::string& path)
{
    if (path.empty())
        return {};
    auto in = open_input(path, "calendar labels");
    try {
        return load_labels(in);
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

/// Restricts to --direction and --station; with no --station the data must hold a single station.
std::vector<PeriodCount> select_series(std::span<const PeriodCount> counts, const Globals& g)
{
    const Direction dir = parse_direction(g.direction);
    std::vector<PeriodCount> out;
    std::set<std::string> stations;
    for (const auto& c : counts) {
        if (c.direction != dir || (!g.station.empty() && c.station_id != g.station))
            continue;
        stations.insert(c.station_id);
        out.push_back(c);
    }
    if (stations.size() > 1) {
        std::string names;
        for (const auto& s : stations)
            names += " " + s;
        throw InputError("counts hold several stations (" + names + " ); select one with --station");
    }
    return out;
}

/// Synthetic schedule used only to range-check period indices when no --schedule is given.
PeriodSchedule schedule_with_periods(int period_count)
{
    std::vector<int> b;
    for (int i = 0; i <= period_count; ++i)
        b.push_back(i);
    std::set<Weekday> days;
    for (int d = 0; d < kWeekdayCount; ++d)
        days.insert(weekday_from_index(d));
    return PeriodSchedule(std::move(b), std::move(days));
}

std::string model_file_name(const RegressionModel& m)
{
    return "model_" + m.label() + "_" + std::string(to_string(m.direction)) + ".json";
}

std::vector<RegressionModel> read_models(const std::string& dir, const PeriodSchedule* schedule, std::ostream& err)
{
    if (!fs::is_directory(dir))
        throw InputError("models directory not found: " + dir);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (entry.is_regular_file() && name.starts_with("model_") && entry.path().extension() == ".json")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw InputError("no model_*.json files in " + dir);
    std::vector<RegressionModel> models;
    for (const auto& f : files) {
        auto loaded = load_model(f, schedule);
        for (const auto& w : loaded.warnings)
            err << "warning: " << w << '\n';
        models.push_back(std::move(loaded.model));
    }
    return models;
}

DayGrouping grouping_of(std::span<const RegressionModel> models)
{
    DayGrouping g;
    for (const auto& m : models)
        if (std::find(g.groups.begin(), g.groups.end(), m.group) == g.groups.end())
            g.groups.push_back(m.group);
    return g;
}

std::string weekday_list(const WeekdaySet& days)
{
    std::string out;
    for (Weekday d : days)
        out += (out.empty() ? "" : ",") + std::string(to_string(d));
    return out;
}

WeekdaySet parse_weekday_list(const std::string& text)
{
    WeekdaySet out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_weekday(item));
    return out;
}

// ---------------------------------------------------------------------------

int cmd_ingest(const Globals& g, const std::string& taps, const std::string& counts_path, const std::string& labels,
               const std::string& weights_path, std::ostream& out)
{
    const PeriodSchedule schedule = require_schedule(g);
    const std::string target = require_out(g);
    if (taps.empty() == counts_path.empty())
        throw InputError("ingest needs exactly one of --taps or --counts");

    std::vector<PeriodCount> rows;
    if (!taps.empty()) {
        auto in = open_input(taps, "taps");
        TapLoadResult res;
        try {
            res = load_taps(in, schedule);
        } catch (const InputError& e) {
            throw InputError(taps + ": " + e.what());
        }
        out << "taps read: " << res.taps << '\n' << "out-of-window taps: " << res.out_of_window << '\n';
        rows = std::move(res.counts);
    } else {
        rows = read_counts(counts_path, schedule);
    }
    out << "rows loaded: " << rows.size() << '\n';

    SourceWeights weights;
    if (!weights_path.empty()) {
        auto in = open_input(weights_path, "weights");
        try {
            const auto doc = nlohmann::json::parse(in);
            for (const auto& [source, w] : doc.items())
                weights[source] = w.get<double>();
        } catch (const nlohmann::json::exception& e) {
            throw InputError("invalid weights file " + weights_path + ": " + e.what());
        }
    }
    rows = fuse_sources(rows, weights);
    out << "rows after source fusion: " << rows.size() << '\n';

    const auto label_rows = read_labels(labels);
    rows = filter_normal(rows, label_rows);
    out << "rows after calendar filter: " << rows.size() << '\n';

    std::ostringstream csv;
    write_counts(csv, rows);
    write_file_atomic(target, csv.str());
    out << "wrote " << target << '\n';
    return kExitOk;
}

int cmd_clean(const Globals& g, const std::string& counts_path, const std::string& labels, const std::string& from,
              const std::string& to, std::ostream& out)
{
    const PeriodSchedule schedule = require_schedule(g);
    const fs::path dir = output_dir(g);
    const auto series = select_series(read_counts(counts_path, schedule), g);
    if (series.empty())
        throw InputError("no counts for the selected station/direction");

    ExpectedGrid grid;
    grid.schedule = schedule;
    grid.directions = {parse_direction(g.direction)};
    grid.station_id = series.front().station_id;
    auto [lo, hi] = std::minmax_element(series.begin(), series.end(), [](const auto& a, const auto& b) {
        return std::chrono::sys_days{a.date} < std::chrono::sys_days{b.date};
    });
    grid.first = from.empty() ? lo->date : parse_date(from);
    grid.last = to.empty() ? hi->date : parse_date(to);

    const auto result = clean_pipeline(series, grid, read_labels(labels), {g.k_fail, g.k_corroborate});

    std::ostringstream csv;
    write_counts(csv, result.counts);
    write_file_atomic(dir / "cleaned_counts.csv", csv.str());
    write_file_atomic(dir / "quality_report.json", to_json(result.report).dump(2) + "\n");

    const auto& r = result.report;
    out << "missing slots: " << r.missing.size() << '\n'
        << "equipment failures: " << r.equipment_failures() << '\n'
        << "traffic events: " << r.anomalies.size() - r.equipment_failures() << '\n'
        << "imputations: " << r.imputations.size() << '\n'
        << "cells with insufficient history: " << r.insufficient_history.size() << '\n'
        << "wrote " << (dir / "cleaned_counts.csv").string() << " and " << (dir / "quality_report.json").string()
        << '\n';
    return kExitOk;
}

void print_anova(const stats::AnovaTable<double>& t, std::ostream& out)
{
    out << std::left << std::setw(22) << "Source of Difference" << std::right << std::setw(18) << "SS"
        << std::setw(6) << "df" << std::setw(18) << "MS" << std::setw(14) << "F" << std::setw(12) << "P-value"
        << '\n';
    auto row = [&](const char* name, const stats::AnovaRow<double>& r) {
        out << std::left << std::setw(22) << name << std::right << std::setw(18) << format_fixed(r.ss, 2)
            << std::setw(6) << r.df << std::setw(18) << (r.ms ? format_fixed(*r.ms, 2) : "")
            << std::setw(14) << (r.f ? format_fixed(*r.f, 4) : "") << std::setw(12) << (r.p ? sci(*r.p) : "")
            << '\n';
    };
    row("Day of week", t.factor_a);
    row("Period", t.factor_b);
    row("Interaction", t.interaction);
    row("Within (error)", t.error);
    row("Total", t.total);
    if (t.degenerate)
        out << "note: zero within-cell variance; F and p follow the degenerate convention\n";
}

int cmd_anova(const Globals& g, const std::string& counts_path, const std::string& days_text, std::ostream& out)
{
    const PeriodSchedule schedule = require_schedule(g);
    const auto series = select_series(read_counts(counts_path, schedule), g);
    WeekdaySet days = days_text.empty() ? WeekdaySet{} : parse_weekday_list(days_text);
    if (days.empty())
        for (int d = 0; d < kWeekdayCount; ++d)
            days.push_back(weekday_from_index(d));
    const auto sample = weekday_period_sample(series, days, schedule.period_count());
    const auto table = stats::two_way_anova(sample);
    out << "Two-factor analysis of variance with replication (" << g.direction << ", days " << weekday_list(days)
        << ", " << sample.replicates() << " replicates per cell)\n";
    print_anova(table, out);
    if (!g.out.empty()) {
        write_file_atomic(g.out, to_json(table).dump(2) + "\n");
        out << "wrote " << g.out << '\n';
    }
    return kExitOk;
}

int cmd_group(const Globals& g, const std::string& counts_path, std::ostream& out)
{
    const PeriodSchedule schedule = require_schedule(g);
    const auto series = select_series(read_counts(counts_path, schedule), g);
    const auto grouping = discover_groups(series, schedule.period_count(), g.alpha);
    for (const auto& e : grouping.evidence)
        out << "test " << std::left << std::setw(28) << weekday_list(e.tested) << std::right
            << " day-effect p = " << sci(e.p_value) << (e.merged ? "  merge" : "  split") << '\n';
    out << "groups:";
    for (const auto& grp : grouping.groups)
        out << ' ' << group_label(grp);
    out << '\n';
    if (!g.out.empty()) {
        write_file_atomic(g.out, to_json(grouping).dump(2) + "\n");
        out << "wrote " << g.out << '\n';
    }
    return kExitOk;
}

void print_model_summary(const RegressionModel& m, std::ostream& out)
{
    const auto& f = m.fit;
    out << "Model " << m.label() << " (" << to_string(m.direction) << ")\n";
    out << "Regression Statistics\n";
    out << "  Multiple R          " << format_fixed(f.multiple_r, 6) << '\n'
        << "  R Square            " << format_fixed(f.r2, 6) << '\n'
        << "  Adjusted R Square   " << format_fixed(f.adj_r2, 6) << '\n'
        << "  Standard Error      " << format_fixed(f.residual_se, 2) << '\n'
        << "  Observations        " << f.observations << '\n';
    out << "ANOVA\n"
        << "  " << std::left << std::setw(12) << "" << std::right << std::setw(6) << "df" << std::setw(16) << "SS"
        << std::setw(16) << "MS" << std::setw(14) << "F" << std::setw(16) << "Significance F" << '\n';
    out << "  " << std::left << std::setw(12) << "Regression" << std::right << std::setw(6) << f.df_regression
        << std::setw(16) << format_fixed(f.ss_regression, 2) << std::setw(16)
        << format_fixed(f.ss_regression / f.df_regression, 2) << std::setw(14) << format_fixed(f.f_stat, 2)
        << std::setw(16) << sci(f.f_significance) << '\n';
    out << "  " << std::left << std::setw(12) << "Residual" << std::right << std::setw(6) << f.df_residual
        << std::setw(16) << format_fixed(f.ss_residual, 2) << std::setw(16)
        << format_fixed(f.df_residual > 0 ? f.ss_residual / f.df_residual : 0.0, 2) << '\n';
    out << "  " << std::left << std::setw(12) << "Total" << std::right << std::setw(6)
        << f.df_regression + f.df_residual << std::setw(16) << format_fixed(f.ss_total, 2) << '\n';
    out << "  " << std::left << std::setw(12) << "" << std::right << std::setw(16) << "Coefficients" << std::setw(16)
        << "Standard Error" << std::setw(12) << "t Stat" << std::setw(12) << "P-value" << '\n';
    auto row = [&](const std::string& name, double coef, const stats::CoefficientStats<double>& s) {
        out << "  " << std::left << std::setw(12) << name << std::right << std::setw(16) << format_fixed(coef, 2)
            << std::setw(16) << format_fixed(s.standard_error, 2) << std::setw(12) << format_fixed(s.t_stat, 2)
            << std::setw(12) << sci(s.p_value) << '\n';
    };
    row("Intercept", f.intercept, f.intercept_stats);
    std::string formula;
    for (Eigen::Index k = 0; k < f.coefficients.size(); ++k) {
        const int period = k + 1 < m.reference_period ? static_cast<int>(k) + 1 : static_cast<int>(k) + 2;
        const std::string name = "t" + std::to_string(period);
        row(name, f.coefficients(k), f.coef_stats[static_cast<std::size_t>(k)]);
        formula += format_fixed(f.coefficients(k), 2) + "*" + name + " + ";
    }
    out << "  Flow " << to_string(m.direction) << ' ' << m.label() << " = " << formula << format_fixed(f.intercept, 2)
        << "\n\n";
}

int cmd_fit(const Globals& g, const std::string& counts_path, const std::string& groups_path, bool include_flagged,
            std::ostream& out)
{
    const PeriodSchedule schedule = require_schedule(g);
    const fs::path dir = output_dir(g);
    const auto series = select_series(read_counts(counts_path, schedule), g);
    auto in = open_input(groups_path, "groups");
    DayGrouping grouping;
    try {
        grouping = grouping_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw InputError("cannot parse groups file " + groups_path + ": " + e.what());
    }
    FitOptions options;
    options.exclude_flagged = !include_flagged;
    const auto models = fit_models(series, grouping, parse_direction(g.direction), schedule, options);
    for (const auto& m : models) {
        print_model_summary(m, out);
        save_model(m, dir / model_file_name(m));
        out << "wrote " << (dir / model_file_name(m)).string() << "\n\n";
    }
    return kExitOk;
}

int cmd_predict(const Globals& g, const std::string& model_path, int period, std::ostream& out, std::ostream& err)
{
    std::optional<PeriodSchedule> schedule;
    if (!g.schedule.empty())
        schedule = load_schedule(g.schedule);
    auto loaded = load_model(model_path, schedule ? &*schedule : nullptr);
    for (const auto& w : loaded.warnings)
        err << "warning: " << w << '\n';
    out << format_fixed(predict(loaded.model, period), 2) << '\n';
    return kExitOk;
}

int cmd_validate(const Globals& g, const std::string& models_dir, const std::string& holdout_path, std::ostream& out,
                 std::ostream& err)
{
    std::optional<PeriodSchedule> schedule;
    if (!g.schedule.empty())
        schedule = load_schedule(g.schedule);
    const auto models = read_models(models_dir, schedule ? &*schedule : nullptr, err);
    const PeriodSchedule check = schedule ? *schedule : schedule_with_periods(models.front().period_count);
    const auto holdout = select_series(read_counts(holdout_path, check), g);
    if (holdout.empty())
        throw InputError("holdout has no counts for the selected station/direction");

    auto [lo, hi] = std::minmax_element(holdout.begin(), holdout.end(), [](const auto& a, const auto& b) {
        return std::chrono::sys_days{a.date} < std::chrono::sys_days{b.date};
    });
    for (const auto& m : models)
        if (m.trained && !(std::chrono::sys_days{hi->date} < std::chrono::sys_days{m.trained->from} ||
                           std::chrono::sys_days{m.trained->to} < std::chrono::sys_days{lo->date}))
            err << "warning: holdout dates " << format_date(lo->date) << ".." << format_date(hi->date)
                << " overlap the training range of model " << m.label() << " (" << format_date(m.trained->from)
                << ".." << format_date(m.trained->to) << ")\n";

    const auto report = validate(models, grouping_of(models), holdout);
    out << "validated entries: " << report.entries.size() << '\n'
        << "skipped zero actuals: " << report.skipped_zero_actual << '\n'
        << "mean APE: " << format_fixed(report.mean_ape_percent, 2) << "%\n";
    if (!g.out.empty()) {
        write_file_atomic(g.out, to_json(report).dump(2) + "\n");
        out << "wrote " << g.out << '\n';
    }
    return kExitOk;
}

int cmd_report(const Globals& g, const std::string& counts_path, const std::string& models_dir, std::ostream& out,
               std::ostream& err)
{
    const PeriodSchedule schedule = require_schedule(g);
    const fs::path dir = output_dir(g);
    const auto counts = select_series(read_counts(counts_path, schedule), g);
    if (counts.empty())
        throw InputError("no cleaned counts to report on in " + counts_path);
    const auto models = read_models(models_dir, &schedule, err);
    const Direction dir_filter = parse_direction(g.direction);
    std::vector<RegressionModel> selected;
    for (const auto& m : models)
        if (m.direction == dir_filter)
            selected.push_back(m);

    const auto daily = daily_totals(counts);
    const auto profile = period_profile(counts, selected);
    std::vector<std::string> written;

    if (g.format == "json") {
        nlohmann::json doc;
        auto& d = doc["daily_totals"] = nlohmann::json::array();
        for (const auto& row : daily)
            d.push_back({{"date", format_date(row.date)}, {"day_of_week", to_string(row.day_of_week)},
                         {"total", row.total}});
        auto& p = doc["period_profile"] = nlohmann::json::array();
        for (const auto& row : profile)
            p.push_back({{"group", row.group},
                         {"period_index", row.period_index},
                         {"observations", row.observations},
                         {"observed_mean", row.observed_mean},
                         {"predicted", row.predicted}});
        write_file_atomic(dir / "report.json", doc.dump(2) + "\n");
        written.push_back("report.json");
    } else if (g.format == "csv") {
        std::ostringstream d, p;
        d << "date,day_of_week,total\n";
        for (const auto& row : daily)
            d << format_date(row.date) << ',' << to_string(row.day_of_week) << ',' << format_fixed(row.total, 2)
              << '\n';
        p << "group,period_index,observations,observed_mean,predicted\n";
        for (const auto& row : profile)
            p << row.group << ',' << row.period_index << ',' << row.observations << ','
              << format_fixed(row.observed_mean, 2) << ',' << format_fixed(row.predicted, 2) << '\n';
        write_file_atomic(dir / "daily_totals.csv", d.str());
        write_file_atomic(dir / "period_profile.csv", p.str());
        written.insert(written.end(), {"daily_totals.csv", "period_profile.csv"});
    } else if (g.format == "md") {
        std::ostringstream md;
        md << "# Passenger flow report (" << g.direction << ")\n\n## Daily totals\n\n"
           << "| date | day_of_week | total |\n|---|---|---:|\n";
        for (const auto& row : daily)
            md << "| " << format_date(row.date) << " | " << to_string(row.day_of_week) << " | "
               << format_fixed(row.total, 2) << " |\n";
        md << "\n## Period profile\n\n| group | period_index | observations | observed_mean | predicted |\n"
           << "|---|---:|---:|---:|---:|\n";
        for (const auto& row : profile)
            md << "| " << row.group << " | " << row.period_index << " | " << row.observations << " | "
               << format_fixed(row.observed_mean, 2) << " | " << format_fixed(row.predicted, 2) << " |\n";
        write_file_atomic(dir / "report.md", md.str());
        written.push_back("report.md");
    } else {
        throw InputError("unknown --format '" + g.format + "' (expected json, csv or md)");
    }

    for (const auto& m : selected) {
        std::ostringstream plot;
        plot << "# period predicted_flow (" << m.label() << ", " << to_string(m.direction) << ")\n";
        for (int p = 1; p <= m.period_count; ++p)
            plot << p << ' ' << format_fixed(predict(m, p), 2) << '\n';
        const std::string name = "plot_" + m.label() + "_" + std::string(to_string(m.direction)) + ".dat";
        write_file_atomic(dir / name, plot.str());
        written.push_back(name);
    }
    out << "daily totals: " << daily.size() << '\n' << "profile rows: " << profile.size() << '\n';
    for (const auto& w : written)
        out << "wrote " << (dir / w).string() << '\n';
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Metro passenger-flow forecasting: cleaning, variance analysis, day grouping and "
                 "dummy-variable regression",
                 "flowcast"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--schedule", g.schedule, "Period schedule JSON");
    app.add_option("--direction", g.direction, "inbound or outbound")
        ->check(CLI::IsMember({"inbound", "outbound"}));
    app.add_option("--station", g.station, "Station id to analyse");
    app.add_option("--out", g.out, "Output file or directory");
    app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"json", "csv", "md"}));
    app.add_option("--alpha", g.alpha, "Significance level");
    app.add_option("--k-fail", g.k_fail, "Robust z threshold for anomaly candidates");
    app.add_option("--k-corroborate", g.k_corroborate, "Robust z threshold for neighbour corroboration");

    std::string taps, counts, labels, weights, from, to, days, groups, model, models, holdout;
    int period = 0;
    bool include_flagged = false;

    auto* ingest = app.add_subcommand("ingest", "Load taps or counts, fuse sources, filter to normal days");
    ingest->add_option("--taps", taps, "Taps CSV");
    ingest->add_option("--counts", counts, "Counts CSV");
    ingest->add_option("--labels", labels, "Calendar labels CSV");
    ingest->add_option("--weights", weights, "Source weights JSON");

    auto* clean = app.add_subcommand("clean", "Detect missing slots and anomalies, impute repairs");
    clean->add_option("--counts", counts, "Counts CSV")->required();
    clean->add_option("--labels", labels, "Calendar labels CSV");
    clean->add_option("--from", from, "First grid date (default: earliest count)");
    clean->add_option("--to", to, "Last grid date (default: latest count)");

    auto* anova = app.add_subcommand("anova", "Weekday x period two-factor analysis of variance");
    anova->add_option("--counts", counts, "Counts CSV")->required();
    anova->add_option("--days", days, "Comma-separated weekdays (default: all)");

    auto* group = app.add_subcommand("group", "Discover day groups");
    group->add_option("--counts", counts, "Counts CSV")->required();

    auto* fit = app.add_subcommand("fit", "Fit one dummy-variable regression per day group");
    fit->add_option("--counts", counts, "Counts CSV")->required();
    fit->add_option("--groups", groups, "Groups JSON from `group`")->required();
    fit->add_flag("--include-flagged", include_flagged, "Train on flagged traffic-event counts too");

    auto* pred = app.add_subcommand("predict", "Predict the flow of one period");
    pred->add_option("--model", model, "Model JSON")->required();
    pred->add_option("--period", period, "Period index")->required();

    auto* val = app.add_subcommand("validate", "Absolute percentage error of models on holdout counts");
    val->add_option("--models", models, "Directory of model_*.json files")->required();
    val->add_option("--holdout", holdout, "Holdout counts CSV")->required();

    auto* rep = app.add_subcommand("report", "Daily totals, period profiles and plot data");
    rep->add_option("--counts", counts, "Cleaned counts CSV")->required();
    rep->add_option("--models", models, "Directory of model_*.json files")->required();

    std::vector<std::string> argv_store{"flowcast"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store)
        argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (ingest->parsed())
            return cmd_ingest(g, taps, counts, labels, weights, out);
        if (clean->parsed())
            return cmd_clean(g, counts, labels, from, to, out);
        if (anova->parsed())
            return cmd_anova(g, counts, days, out);
        if (group->parsed())
            return cmd_group(g, counts, out);
        if (fit->parsed())
            return cmd_fit(g, counts, groups, include_flagged, out);
        if (pred->parsed())
            return cmd_predict(g, model, period, out, err);
        if (val->parsed())
            return cmd_validate(g, models, holdout, out, err);
        if (rep->parsed())
            return cmd_report(g, counts, models, out, err);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitInput;
}

} // namespace flowcast::cli
