#pragma once

#include "flowcast/core.hpp"
#include "flowcast/forecast.hpp"

#include <array>
#include <random>
#include <string>
#include <vector>

namespace fixtures {

using namespace flowcast;

struct Formula
{
    std::array<double, 7> coefficients;
    double intercept;
};

// Mon-Thu carries the unrounded regression output, the others the rounded two-decimal formulas
inline const Formula kMonThu{{1963.579167, 1014.8125, 676.375, 776.125, 1124.0625, 2476.875, 717.4375}, 522.6875};
inline const Formula kMonThuRounded{{1963.58, 1014.81, 676.38, 776.13, 1124.06, 2476.88, 717.44}, 522.69};
inline const Formula kFri{{1711.83, 826, 591, 697.75, 949, 2660.25, 905.5}, 641.5};
inline const Formula kSat{{609.67, 692.5, 714.5, 825.75, 707.75, 869.25, 482.75}, 616};
inline const Formula kSun{{208.92, 528.75, 578.75, 694.5, 747, 821.75, 585.5}, 653.75};

inline const Formula& formula_of(Weekday d)
{
    switch (d) {
    case Weekday::Fri:
        return kFri;
    case Weekday::Sat:
        return kSat;
    case Weekday::Sun:
        return kSun;
    default:
        return kMonThu;
    }
}

inline double period_mean(Weekday d, int period)
{
    const auto& f = formula_of(d);
    return f.intercept + (period < 8 ? f.coefficients[static_cast<std::size_t>(period - 1)] : 0.0);
}

inline Date day(int y, unsigned m, unsigned d)
{
    return Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
}

inline const Date kFirstMonday = day(2014, 7, 7);

inline PeriodCount count(Date date, int period, double value, std::string station = "FUTIAN",
                         Direction dir = Direction::Outbound, std::string source = "afc",
                         Quality quality = Quality::Observed)
{
    return PeriodCount{date, weekday_of(date), period, dir, std::move(station), value, std::move(source), quality};
}

/// `weeks` x 7 days x 8 periods of outbound counts following the four
/// regimes, with Gaussian noise of `sigma` shifted so each weekday-period
/// cell mean equals the regime mean exactly.
inline std::vector<PeriodCount> weekly_regimes(unsigned seed, int weeks = 4, double sigma = 10.0)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    std::vector<std::vector<double>> offsets(7 * 8);
    for (auto& cell : offsets) {
        double mean = 0;
        for (int w = 0; w < weeks; ++w) {
            cell.push_back(noise(rng));
            mean += cell.back();
        }
        mean /= weeks;
        for (auto& v : cell)
            v -= mean;
    }
    std::vector<PeriodCount> out;
    for (int w = 0; w < weeks; ++w)
        for (int d = 0; d < 7; ++d) {
            const Date date = add_days(kFirstMonday, 7 * w + d);
            for (int p = 1; p <= 8; ++p)
                out.push_back(count(date, p,
                                    period_mean(weekday_of(date), p) +
                                        offsets[static_cast<std::size_t>(d * 8 + p - 1)][static_cast<std::size_t>(w)]));
        }
    return out;
}

/// Four weeks of counts whose per-cell offsets are {+a, +b, -b, -a}, which
/// keeps every robust z below 2 / 1.4826.
inline std::vector<PeriodCount> symmetric_grid()
{
    std::vector<PeriodCount> out;
    for (int w = 0; w < 4; ++w)
        for (int d = 0; d < 7; ++d) {
            const Date date = add_days(kFirstMonday, 7 * w + d);
            for (int p = 1; p <= 8; ++p) {
                const double a = 10 + (3 * p + d) % 12, b = 3 + (5 * p + 2 * d) % 6;
                const std::array<double, 4> pattern{a, b, -b, -a};
                out.push_back(count(date, p, period_mean(weekday_of(date), p) + pattern[static_cast<std::size_t>(w)]));
            }
        }
    return out;
}

inline RegressionModel model_of(const Formula& f, WeekdaySet group, const PeriodSchedule& schedule)
{
    return model_from_parameters(std::move(group), Direction::Outbound, schedule, f.intercept,
                                 std::vector<double>(f.coefficients.begin(), f.coefficients.end()));
}

inline WeekdaySet mon_thu() { return {Weekday::Mon, Weekday::Tue, Weekday::Wed, Weekday::Thu}; }

inline DayGrouping four_groups()
{
    DayGrouping g;
    g.groups = {mon_thu(), {Weekday::Fri}, {Weekday::Sat}, {Weekday::Sun}};
    return g;
}

} // namespace fixtures
