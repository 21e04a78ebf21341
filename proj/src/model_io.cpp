#include "flowcast/model_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

namespace flowcast {

namespace {

using nlohmann::json;

json number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    return v;
}

double read_number(const json& v)
{
    if (v.is_number())
        return v.get<double>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "nan")
            return std::numeric_limits<double>::quiet_NaN();
        if (s == "inf")
            return std::numeric_limits<double>::infinity();
        if (s == "-inf")
            return -std::numeric_limits<double>::infinity();
    }
    throw SchemaError("expected a number, got " + v.dump());
}

json coef_json(const stats::CoefficientStats<double>& s)
{
    return {{"standard_error", number(s.standard_error)},
            {"t_stat", number(s.t_stat)},
            {"p_value", number(s.p_value)}};
}

stats::CoefficientStats<double> coef_from_json(const json& j)
{
    return {read_number(j.at("standard_error")), read_number(j.at("t_stat")), read_number(j.at("p_value"))};
}

json group_json(const WeekdaySet& group)
{
    json out = json::array();
    for (Weekday d : group)
        out.push_back(to_string(d));
    return out;
}

WeekdaySet group_from_json(const json& j)
{
    WeekdaySet out;
    for (const auto& d : j)
        out.push_back(parse_weekday(d.get<std::string>()));
    return out;
}

json anova_row(const stats::AnovaRow<double>& row)
{
    json out{{"ss", number(row.ss)}, {"df", row.df}};
    if (row.ms)
        out["ms"] = number(*row.ms);
    if (row.f)
        out["f"] = number(*row.f);
    if (row.p)
        out["p"] = number(*row.p);
    return out;
}

} // namespace

json to_json(const RegressionModel& model)
{
    const auto& fit = model.fit;
    json coefficients = json::array();
    for (Eigen::Index i = 0; i < fit.coefficients.size(); ++i)
        coefficients.push_back(number(fit.coefficients(i)));
    json coef_stats = json::array();
    for (const auto& s : fit.coef_stats)
        coef_stats.push_back(coef_json(s));

    json doc;
    doc["group"] = group_json(model.group);
    doc["direction"] = to_string(model.direction);
    doc["schedule_fingerprint"] = model.schedule_fingerprint;
    doc["period_count"] = model.period_count;
    doc["reference_period"] = model.reference_period;
    doc["intercept"] = number(fit.intercept);
    doc["coefficients"] = std::move(coefficients);
    doc["diagnostics"] = {{"r2", number(fit.r2)},
                          {"adj_r2", number(fit.adj_r2)},
                          {"multiple_r", number(fit.multiple_r)},
                          {"residual_se", number(fit.residual_se)},
                          {"f_stat", number(fit.f_stat)},
                          {"f_significance", number(fit.f_significance)},
                          {"ss_regression", number(fit.ss_regression)},
                          {"ss_residual", number(fit.ss_residual)},
                          {"ss_total", number(fit.ss_total)},
                          {"df_regression", fit.df_regression},
                          {"df_residual", fit.df_residual},
                          {"observations", fit.observations},
                          {"degenerate", fit.degenerate},
                          {"intercept_stats", coef_json(fit.intercept_stats)},
                          {"coef_stats", std::move(coef_stats)}};
    if (model.trained)
        doc["fitted_at"] = {{"from", format_date(model.trained->from)}, {"to", format_date(model.trained->to)}};
    else
        doc["fitted_at"] = nullptr;
    return doc;
}

RegressionModel model_from_json(const json& doc)
{
    try {
        RegressionModel m;
        m.group = group_from_json(doc.at("group"));
        if (m.group.empty())
            throw SchemaError("model group is empty");
        m.direction = parse_direction(doc.at("direction").get<std::string>());
        m.schedule_fingerprint = doc.at("schedule_fingerprint").get<std::string>();
        m.period_count = doc.at("period_count").get<int>();
        m.reference_period = doc.at("reference_period").get<int>();
        if (m.period_count < 2 || m.reference_period < 1 || m.reference_period > m.period_count)
            throw SchemaError("model period_count/reference_period out of range");

        auto& fit = m.fit;
        fit.intercept = read_number(doc.at("intercept"));
        const auto& coefficients = doc.at("coefficients");
        if (!coefficients.is_array() || static_cast<int>(coefficients.size()) != m.period_count - 1)
            throw SchemaError("model has " + std::to_string(coefficients.size()) + " coefficients, expected " +
                              std::to_string(m.period_count - 1));
        fit.coefficients.resize(static_cast<Eigen::Index>(coefficients.size()));
        for (std::size_t i = 0; i < coefficients.size(); ++i)
            fit.coefficients(static_cast<Eigen::Index>(i)) = read_number(coefficients[i]);

        const auto& d = doc.at("diagnostics");
        fit.r2 = read_number(d.at("r2"));
        fit.adj_r2 = read_number(d.at("adj_r2"));
        fit.multiple_r = read_number(d.at("multiple_r"));
        fit.residual_se = read_number(d.at("residual_se"));
        fit.f_stat = read_number(d.at("f_stat"));
        fit.f_significance = read_number(d.at("f_significance"));
        fit.ss_regression = read_number(d.at("ss_regression"));
        fit.ss_residual = read_number(d.at("ss_residual"));
        fit.ss_total = read_number(d.at("ss_total"));
        fit.df_regression = d.at("df_regression").get<int>();
        fit.df_residual = d.at("df_residual").get<int>();
        fit.observations = d.at("observations").get<Eigen::Index>();
        fit.degenerate = d.at("degenerate").get<bool>();
        fit.intercept_stats = coef_from_json(d.at("intercept_stats"));
        for (const auto& s : d.at("coef_stats"))
            fit.coef_stats.push_back(coef_from_json(s));
        if (static_cast<int>(fit.coef_stats.size()) != m.period_count - 1)
            throw SchemaError("model coef_stats length does not match coefficients");

        if (const auto& at = doc.at("fitted_at"); !at.is_null())
            m.trained = DateRange{parse_date(at.at("from").get<std::string>()),
                                  parse_date(at.at("to").get<std::string>())};
        return m;
    } catch (const json::exception& e) {
        throw SchemaError(std::string("invalid model document: ") + e.what());
    } catch (const SchemaError&) {
        throw;
    } catch (const InputError& e) {
        throw SchemaError(std::string("invalid model document: ") + e.what());
    }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw InputError("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out)
            throw InputError("failed writing " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw InputError("cannot move " + tmp.string() + " to " + path.string());
    }
}

void save_model(const RegressionModel& model, const std::filesystem::path& path)
{
    write_file_atomic(path, to_json(model).dump(2) + "\n");
}

LoadedModel load_model(const std::filesystem::path& path, const PeriodSchedule* expected)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open model file: " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw SchemaError("cannot parse model file " + path.string() + ": " + e.what());
    }
    LoadedModel loaded{model_from_json(doc), {}};
    if (expected && expected->fingerprint() != loaded.model.schedule_fingerprint)
        loaded.warnings.push_back("model " + path.string() + " was fitted under schedule " +
                                  loaded.model.schedule_fingerprint + " but the current schedule is " +
                                  expected->fingerprint());
    if (expected && expected->period_count() != loaded.model.period_count)
        loaded.warnings.push_back("model " + path.string() + " has " + std::to_string(loaded.model.period_count) +
                                  " periods, schedule has " + std::to_string(expected->period_count()));
    return loaded;
}

json to_json(const ValidationReport& report)
{
    json entries = json::array();
    for (const auto& e : report.entries)
        entries.push_back({{"date", format_date(e.date)},
                           {"day_of_week", to_string(e.day_of_week)},
                           {"period_index", e.period_index},
                           {"actual", number(e.actual)},
                           {"predicted", number(e.predicted)},
                           {"ape_percent", number(e.ape_percent)}});
    return {{"entries", std::move(entries)},
            {"mean_ape_percent", number(report.mean_ape_percent)},
            {"skipped_zero_actual", report.skipped_zero_actual}};
}

json to_json(const DayGrouping& grouping)
{
    json groups = json::array();
    for (const auto& g : grouping.groups)
        groups.push_back(group_json(g));
    json evidence = json::array();
    for (const auto& e : grouping.evidence)
        evidence.push_back({{"tested", group_json(e.tested)}, {"p_value", number(e.p_value)}, {"merged", e.merged}});
    return {{"groups", std::move(groups)}, {"alpha", grouping.alpha}, {"evidence", std::move(evidence)}};
}

DayGrouping grouping_from_json(const json& doc)
{
    try {
        DayGrouping g;
        for (const auto& group : doc.at("groups"))
            g.groups.push_back(group_from_json(group));
        g.alpha = doc.value("alpha", 0.05);
        if (doc.contains("evidence"))
            for (const auto& e : doc.at("evidence"))
                g.evidence.push_back(
                    MergeEvidence{group_from_json(e.at("tested")), read_number(e.at("p_value")), e.at("merged")});
        check_partition(g);
        return g;
    } catch (const json::exception& e) {
        throw SchemaError(std::string("invalid grouping document: ") + e.what());
    }
}

json to_json(const stats::AnovaTable<double>& table)
{
    return {{"factor_a", anova_row(table.factor_a)},
            {"factor_b", anova_row(table.factor_b)},
            {"interaction", anova_row(table.interaction)},
            {"error", anova_row(table.error)},
            {"total", anova_row(table.total)},
            {"degenerate", table.degenerate}};
}

} // namespace flowcast
