// Prints one PASS/FAIL line per acceptance criterion; exits non-zero on any failure.

#include "fixtures.hpp"
#include "oracles.hpp"

#include "flowcast/forecast.hpp"
#include "flowcast/quality.hpp"
#include "flowcast/stats/anova.hpp"
#include "flowcast/stats/distributions.hpp"
#include "flowcast/stats/ols.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace flowcast;
using namespace fixtures;

namespace {

struct Outcome
{
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok && pass)
            detail << what;
        pass = pass && ok;
    }
};

bool close_rel(double x, double y, double tol)
{
    return std::abs(x - y) <= tol * std::max({std::abs(x), std::abs(y), 1e-300});
}

std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

Outcome coefficient_recovery()
{
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    const auto counts = weekly_regimes(1);
    const auto models = fit_models(counts, four_groups(), Direction::Outbound, PeriodSchedule::default_schedule());
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto& fit = models.front().fit;
    o.require(models.front().group == mon_thu(), "first model is not Mon-Thu");
    o.require(std::abs(fit.intercept - 522.6875) <= 1e-6, "intercept " + num(fit.intercept));
    for (int k = 0; k < 7; ++k)
        o.require(std::abs(fit.coefficients(k) - kMonThu.coefficients[std::size_t(k)]) <= 1e-6,
                  "coefficient " + std::to_string(k + 1) + " = " + num(fit.coefficients(k)));
    o.require(seconds < 1.0, "took " + num(seconds) + " s");
    o.detail << "intercept " << num(fit.intercept) << ", 7 coefficients within 1e-6, " << num(seconds * 1e3) << " ms";
    return o;
}

Outcome formula_predictions()
{
    Outcome o;
    const auto schedule = PeriodSchedule::default_schedule();
    struct Case
    {
        const Formula* formula;
        WeekdaySet group;
        std::array<double, 8> expected;
    };
    // intercept + coefficient, summed by hand from the rounded formulas
    const std::vector<Case> cases{
        {&kMonThuRounded, mon_thu(), {2486.27, 1537.50, 1199.07, 1298.82, 1646.75, 2999.57, 1240.13, 522.69}},
        {&kFri, {Weekday::Fri}, {2353.33, 1467.50, 1232.50, 1339.25, 1590.50, 3301.75, 1547.00, 641.50}},
        {&kSat, {Weekday::Sat}, {1225.67, 1308.50, 1330.50, 1441.75, 1323.75, 1485.25, 1098.75, 616.00}},
        {&kSun, {Weekday::Sun}, {862.67, 1182.50, 1232.50, 1348.25, 1400.75, 1475.50, 1239.25, 653.75}},
    };
    int checked = 0;
    for (const auto& c : cases) {
        const auto model = model_of(*c.formula, c.group, schedule);
        for (int p = 1; p <= 8; ++p, ++checked) {
            const double got = predict(model, p);
            o.require(std::abs(got - c.expected[std::size_t(p - 1)]) <= 0.01,
                      group_label(c.group) + " period " + std::to_string(p) + " = " + num(got));
        }
    }
    o.detail << checked << " (group, period) pairs within 0.01";
    return o;
}

Outcome adjusted_r2_identity()
{
    Outcome o;
    const double adj = stats::adjusted_r2(0.988411983, 127, 8);
    o.require(std::abs(adj - 0.987730) <= 5e-6, "");
    o.detail << "adjusted R2 = " << num(adj);
    return o;
}

Outcome regression_anova_identities()
{
    Outcome o;
    const auto a = stats::regression_anova(67873681.0, 795742.4, 7, 119);
    o.require(std::abs(a.ms_residual - 6686.91) <= 0.1, "MS_residual " + num(a.ms_residual) + "; ");
    o.require(std::abs(a.f_stat - 1450.03) <= 0.5, "F " + num(a.f_stat) + "; ");
    o.require(std::abs(a.residual_se - 81.77) <= 0.01, "SE " + num(a.residual_se) + "; ");
    o.require(a.f_significance < 1e-50, "Significance F " + num(a.f_significance) + "; ");
    o.detail << "MS_res " << num(a.ms_residual) << ", F " << num(a.f_stat) << ", SE " << num(a.residual_se)
             << ", Significance F " << num(a.f_significance);
    return o;
}

Outcome anova_equivalence()
{
    Outcome o;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> level(50, 500), noise(-40, 40);
    int fixtures_checked = 0;
    for (auto [a, b, r] : {std::array<int, 3>{3, 3, 3}, std::array<int, 3>{7, 8, 4}})
        for (int rep = 0; rep < 20; ++rep, ++fixtures_checked) {
            oracle::Nested y(static_cast<std::size_t>(a), std::vector<std::vector<double>>(static_cast<std::size_t>(b)));
            for (auto& row : y)
                for (auto& cell : row) {
                    const double m = level(rng);
                    for (int k = 0; k < r; ++k)
                        cell.push_back(m + noise(rng));
                }
            const auto t = stats::two_way_anova(stats::FactorialSample<double>::from_nested(y));
            const auto s = oracle::anova(y);
            const std::vector<std::pair<double, double>> pairs{
                {t.factor_a.ss, s.ss_a}, {t.factor_b.ss, s.ss_b}, {t.interaction.ss, s.ss_ab},
                {t.error.ss, s.ss_e},    {t.total.ss, s.ss_t},    {*t.factor_a.ms, s.ms_a},
                {*t.factor_b.ms, s.ms_b}, {*t.interaction.ms, s.ms_ab}, {*t.error.ms, s.ms_e},
                {*t.factor_a.f, s.f_a},   {*t.factor_b.f, s.f_b},   {*t.interaction.f, s.f_ab}};
            for (const auto& [got, want] : pairs)
                o.require(close_rel(got, want, 1e-9), "mismatch " + num(got) + " vs " + num(want) + "; ");
            o.require(t.factor_a.df == s.df_a && t.factor_b.df == s.df_b && t.interaction.df == s.df_ab &&
                          t.error.df == s.df_e && t.total.df == s.df_t,
                      "df mismatch; ");
        }
    o.detail << fixtures_checked << " fixtures (3x3x3 and 7x8x4) match the triple-sum oracle to 1e-9";
    return o;
}

Outcome ols_closed_form()
{
    Outcome o;
    std::mt19937_64 rng(6);
    double worst_orth = 0;
    for (int rep = 0; rep < 20; ++rep) {
        const int p = std::uniform_int_distribution<int>(2, 9)(rng);
        const int r = std::uniform_int_distribution<int>(2, 8)(rng);
        const int reference = std::uniform_int_distribution<int>(1, p)(rng);
        std::vector<int> category;
        for (int c = 1; c <= p; ++c)
            category.insert(category.end(), std::size_t(r), c);
        std::shuffle(category.begin(), category.end(), rng);
        std::vector<double> y;
        for (int c : category)
            y.push_back(100.0 * c + std::normal_distribution<double>(0, 30)(rng));

        const stats::DummyDesign design(category, p, reference);
        const auto fit = stats::ols_dummy_fit(y, design);
        const auto means = oracle::category_means(y, category);
        o.require(std::abs(fit.intercept - means.at(reference)) <= 1e-9 * std::max(1.0, std::abs(means.at(reference))),
                  "intercept mismatch; ");
        for (int k = 0; k < p - 1; ++k) {
            const int c = design.category_of_column(k);
            const double want = means.at(c) - means.at(reference);
            o.require(std::abs(fit.coefficients(k) - want) <= 1e-9 * std::max(1.0, std::abs(want)),
                      "coefficient mismatch; ");
        }
        const Eigen::MatrixXd x = design.matrix<double>();
        const Eigen::Map<const Eigen::VectorXd> yv(y.data(), Eigen::Index(y.size()));
        Eigen::VectorXd beta(p);
        beta << fit.intercept, fit.coefficients;
        const double orth = (x.transpose() * (yv - x * beta)).cwiseAbs().maxCoeff();
        worst_orth = std::max(worst_orth, orth / yv.norm());
        o.require(orth <= 1e-6 * yv.norm(), "residuals not orthogonal; ");
    }
    o.detail << "20 designs match cell means to 1e-9; max |X'e|/||y|| = " << num(worst_orth);
    return o;
}

Outcome tail_accuracy()
{
    Outcome o;
    const std::vector<double> targets{1e-6, 1e-5, 1e-4, 1e-3, 0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99};
    const std::vector<std::pair<double, double>> f_dfs{{1, 10}, {3, 20}, {7, 119}, {6, 112}, {2, 5}, {12, 40},
                                                       {1, 1},  {4, 9},  {21, 96}, {7, 24},  {5, 3}, {30, 200},
                                                       {2, 60}};
    const std::vector<double> t_dfs{1, 2, 3, 5, 8, 10, 15, 24, 30, 60, 119, 250};
    double worst = 0;
    int points = 0;
    for (std::size_t i = 0; i < targets.size(); ++i, ++points) {
        const auto [d1, d2] = f_dfs[i];
        const double f = oracle::invert_tail([&](double x) { return oracle::f_tail(x, d1, d2); }, targets[i]);
        const double diff = std::abs(stats::f_tail(f, d1, d2) - oracle::f_tail(f, d1, d2));
        worst = std::max(worst, diff);
        o.require(diff <= 1e-4, "F(" + num(d1) + "," + num(d2) + ") at " + num(f) + "; ");
    }
    for (std::size_t i = 0; i < t_dfs.size(); ++i, ++points) {
        const double p = targets[(i * 5) % targets.size()];
        const double t = oracle::invert_tail([&](double x) { return oracle::t_two_sided(x, t_dfs[i]); }, p);
        const double diff = std::abs(stats::t_tail_two_sided(t, t_dfs[i]) - oracle::t_two_sided(t, t_dfs[i]));
        worst = std::max(worst, diff);
        o.require(diff <= 1e-4, "t(" + num(t_dfs[i]) + ") at " + num(t) + "; ");
    }

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> stat(0.0, 30.0), dof(1.0, 150.0);
    for (int rep = 0; rep < 500; ++rep) {
        const double d1 = dof(rng), d2 = dof(rng), x = stat(rng), y = stat(rng);
        const double lo = std::min(x, y), hi = std::max(x, y);
        o.require(stats::f_tail(lo, d1, d2) >= stats::f_tail(hi, d1, d2), "F tail not monotone; ");
        o.require(stats::t_tail_two_sided(lo, d2) >= stats::t_tail_two_sided(hi, d2), "t tail not monotone; ");
        o.require(stats::t_tail_two_sided(x, d2) == stats::t_tail_two_sided(-x, d2), "t tail not symmetric; ");
        o.require(std::abs(stats::f_tail(x * x, 1, d2) - stats::t_tail_two_sided(x, d2)) <= 1e-12,
                  "F(1,df) tail differs from two-sided t; ");
        o.require(std::abs(stats::f_tail(x, d1, d2) + stats::f_cdf(x, d1, d2) - 1.0) <= 1e-12,
                  "tail + cdf != 1; ");
    }
    o.detail << points << " points within 1e-4 of quadrature (max diff " << num(worst)
             << "); monotonicity and symmetry hold on 500 random draws";
    return o;
}

Outcome group_discovery()
{
    Outcome o;
    const auto expected = four_groups().groups;
    int ok = 0;
    for (unsigned seed = 1; seed <= 10; ++seed) {
        const auto g = discover_groups(weekly_regimes(seed), 8, 0.05);
        if (g.groups == expected)
            ++ok;
        else
            o.require(false, "seed " + std::to_string(seed) + " grouped differently; ");
    }
    o.detail << ok << "/10 seeds give Mon-Thu | Fri | Sat | Sun";
    return o;
}

Outcome quality_pipeline()
{
    Outcome o;
    auto counts = symmetric_grid();
    const Date missing_day = add_days(kFirstMonday, 11), spike_day = add_days(kFirstMonday, 19),
               surge_day = add_days(kFirstMonday, 13);
    std::erase_if(counts, [&](const PeriodCount& c) { return c.date == missing_day && c.period_index == 3; });
    for (auto& c : counts) {
        if (c.date == spike_day && c.period_index == 5)
            c.count *= 4.0;
        if (c.date == surge_day && c.period_index >= 5 && c.period_index <= 7)
            c.count += 600.0;
    }
    ExpectedGrid grid;
    grid.first = kFirstMonday;
    grid.last = add_days(kFirstMonday, 27);
    grid.station_id = "FUTIAN";

    const auto first = clean_pipeline(counts, grid, {});
    o.require(detect_missing(first.counts, grid).empty(), "output not grid-complete; ");
    o.require(first.counts.size() == 4 * 7 * 8, "output has " + std::to_string(first.counts.size()) + " rows; ");
    o.require(first.report.imputations.size() == 2,
              std::to_string(first.report.imputations.size()) + " imputations; ");
    double spike_z = 0;
    for (const auto& a : first.report.anomalies)
        if (a.key.date == spike_day)
            spike_z = a.robust_z;
    o.require(spike_z > 10, "spike z = " + num(spike_z) + "; ");
    int flagged = 0;
    for (const auto& c : first.counts)
        if (c.quality == Quality::FlaggedEvent) {
            ++flagged;
            o.require(c.date == surge_day && c.period_index >= 5 && c.period_index <= 7, "unexpected flag; ");
        }
    o.require(flagged == 3, std::to_string(flagged) + " flagged rows; ");

    const auto second = clean_pipeline(first.counts, grid, {});
    o.require(second.counts == first.counts, "second pass changed the output; ");
    o.require(second.report.imputations.empty(), "second pass imputed; ");
    o.detail << "grid-complete, " << first.report.imputations.size() << " imputations, spike z " << num(spike_z)
             << ", " << flagged << " surge rows flagged, idempotent";
    return o;
}

Outcome ape_semantics()
{
    Outcome o;
    o.require(absolute_percentage_error(1234.5, 1234.5) == 0.0, "APE of an exact prediction is not 0; ");
    // predictions 110, 120, ..., 170, 100 against actuals of 100: APEs 10..70 and 0, mean 280 / 8
    const auto schedule = PeriodSchedule::default_schedule();
    const auto model = model_from_parameters(mon_thu(), Direction::Outbound, schedule, 100.0,
                                             {10, 20, 30, 40, 50, 60, 70});
    std::vector<PeriodCount> holdout;
    for (int p = 1; p <= 8; ++p)
        holdout.push_back(count(kFirstMonday, p, 100.0));
    const std::vector<RegressionModel> models{model};
    DayGrouping grouping;
    grouping.groups = {mon_thu()};
    const auto report = validate(models, grouping, holdout);
    o.require(report.entries.size() == 8, "entries " + std::to_string(report.entries.size()) + "; ");
    o.require(std::abs(report.mean_ape_percent - 35.0) <= 1e-9, "mean APE " + num(report.mean_ape_percent) + "; ");
    o.detail << "exact prediction APE 0; 8-entry mean APE " << num(report.mean_ape_percent) << "% (expected 35%)";
    return o;
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"Mon-Thu coefficient recovery", coefficient_recovery},
        {"Four-group formula predictions", formula_predictions},
        {"Adjusted R2 identity", adjusted_r2_identity},
        {"Regression ANOVA identities", regression_anova_identities},
        {"ANOVA brute-force equivalence", anova_equivalence},
        {"OLS closed-form oracle", ols_closed_form},
        {"Tail-probability accuracy", tail_accuracy},
        {"Day-group discovery", group_discovery},
        {"Quality pipeline", quality_pipeline},
        {"APE semantics", ape_semantics},
    };
    int failures = 0;
    int index = 1;
    for (const auto& [name, check] : criteria) {
        Outcome outcome;
        try {
            outcome = check();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail << "exception: " << e.what();
        }
        failures += outcome.pass ? 0 : 1;
        std::cout << (outcome.pass ? "PASS" : "FAIL") << "  " << index++ << ". " << name << ": "
                  << outcome.detail.str() << '\n';
    }
    std::cout << (failures == 0 ? "all acceptance criteria pass" : std::to_string(failures) + " criteria failed")
              << '\n';
    return failures == 0 ? 0 : 1;
}
