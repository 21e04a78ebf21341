#pragma once

#include "flowcast/core.hpp"
#include "flowcast/stats/distributions.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace flowcast::stats {

/// Balanced a x b x r sample for a two-factor design with replication.
///
/// Stored as an (a*b) x r array; row `i*b + j` holds the r replicates of
/// cell (i, j).
template <typename Scalar = double>
class FactorialSample
{
  public:
    using Cells = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    FactorialSample(Eigen::Index levels_a, Eigen::Index levels_b, Cells values)
        : a_(levels_a), b_(levels_b), values_(std::move(values))
    {
        if (a_ < 2 || b_ < 2)
            throw InputError("factorial sample needs at least 2 levels per factor");
        if (values_.rows() != a_ * b_)
            throw InputError("factorial sample has " + std::to_string(values_.rows()) + " cells, expected " +
                             std::to_string(a_ * b_));
        if (values_.cols() < 2)
            throw InputError("factorial sample needs at least 2 replicates per cell");
        if (!values_.allFinite())
            throw InputError("factorial sample contains non-finite values");
    }

    /// Builds from nested [a][b][r] vectors; throws if any cell size differs.
    static FactorialSample from_nested(const std::vector<std::vector<std::vector<Scalar>>>& nested)
    {
        const auto a = static_cast<Eigen::Index>(nested.size());
        if (a == 0 || nested.front().empty())
            throw InputError("factorial sample is empty");
        const auto b = static_cast<Eigen::Index>(nested.front().size());
        const auto r = static_cast<Eigen::Index>(nested.front().front().size());
        Cells values(a * b, r);
        for (Eigen::Index i = 0; i < a; ++i) {
            if (static_cast<Eigen::Index>(nested[i].size()) != b)
                throw InputError("unbalanced factorial sample: level " + std::to_string(i) + " has " +
                                 std::to_string(nested[i].size()) + " factor-B levels");
            for (Eigen::Index j = 0; j < b; ++j) {
                const auto& cell = nested[i][j];
                if (static_cast<Eigen::Index>(cell.size()) != r)
                    throw InputError("unbalanced factorial sample: cell (" + std::to_string(i) + "," +
                                     std::to_string(j) + ") has " + std::to_string(cell.size()) +
                                     " replicates, expected " + std::to_string(r));
                for (Eigen::Index k = 0; k < r; ++k)
                    values(i * b + j, k) = cell[k];
            }
        }
        return FactorialSample(a, b, std::move(values));
    }

    Eigen::Index levels_a() const { return a_; }
    Eigen::Index levels_b() const { return b_; }
    Eigen::Index replicates() const { return values_.cols(); }
    const Cells& values() const { return values_; }

    Scalar operator()(Eigen::Index i, Eigen::Index j, Eigen::Index k) const { return values_(i * b_ + j, k); }

  private:
    Eigen::Index a_;
    Eigen::Index b_;
    Cells values_;
};

template <typename Scalar = double>
struct AnovaRow
{
    Scalar ss = 0;
    int df = 0;
    std::optional<Scalar> ms;
    std::optional<Scalar> f;
    std::optional<Scalar> p;
};

template <typename Scalar = double>
struct AnovaTable
{
    AnovaRow<Scalar> factor_a;
    AnovaRow<Scalar> factor_b;
    AnovaRow<Scalar> interaction;
    AnovaRow<Scalar> error;
    AnovaRow<Scalar> total;
    /// Error variance is zero: effects with positive MS get F = +inf, p = 0;
    /// effects with zero MS get F = 0, p = 1.
    bool degenerate = false;
};

/// Balanced two-factor analysis of variance with replication.
template <typename Scalar>
AnovaTable<Scalar> two_way_anova(const FactorialSample<Scalar>& sample)
{
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    const Eigen::Index a = sample.levels_a();
    const Eigen::Index b = sample.levels_b();
    const Eigen::Index r = sample.replicates();
    const auto& y = sample.values();

    const Vector cell_vec = y.rowwise().mean().matrix();
    const Eigen::Map<const Matrix> cell_means(cell_vec.data(), a, b);
    const Vector day_means = cell_means.rowwise().mean();
    const Vector period_means = cell_means.colwise().mean().transpose();
    const Scalar grand = cell_means.mean();

    AnovaTable<Scalar> t;
    t.factor_a.ss = Scalar(b * r) * (day_means.array() - grand).square().sum();
    t.factor_b.ss = Scalar(a * r) * (period_means.array() - grand).square().sum();
    const Matrix inter = (cell_means.colwise() - day_means).rowwise() - period_means.transpose();
    t.interaction.ss = Scalar(r) * (inter.array() + grand).square().sum();
    t.error.ss = (y.colwise() - cell_vec.array()).square().sum();
    t.total.ss = (y - grand).square().sum();

    t.factor_a.df = static_cast<int>(a - 1);
    t.factor_b.df = static_cast<int>(b - 1);
    t.interaction.df = static_cast<int>((a - 1) * (b - 1));
    t.error.df = static_cast<int>(a * b * (r - 1));
    t.total.df = static_cast<int>(a * b * r - 1);

    const Scalar ms_error = t.error.ss / static_cast<Scalar>(t.error.df);
    t.error.ms = ms_error;

    // Treat error variance as zero when it is at rounding level of the data.
    const Scalar scale = y.square().sum();
    t.degenerate = t.error.ss <= Scalar(64) * std::numeric_limits<Scalar>::epsilon() * scale;

    for (AnovaRow<Scalar>* row : {&t.factor_a, &t.factor_b, &t.interaction}) {
        row->ms = row->ss / static_cast<Scalar>(row->df);
        if (t.degenerate) {
            const bool effect = *row->ms > Scalar(0) &&
                                row->ss > Scalar(64) * std::numeric_limits<Scalar>::epsilon() * scale;
            row->f = effect ? std::numeric_limits<Scalar>::infinity() : Scalar(0);
            row->p = effect ? Scalar(0) : Scalar(1);
        } else {
            row->f = *row->ms / ms_error;
            row->p = static_cast<Scalar>(f_tail(static_cast<double>(*row->f), row->df, t.error.df));
        }
    }
    return t;
}

} // namespace flowcast::stats
