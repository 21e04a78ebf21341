#pragma once

#include "flowcast/core.hpp"
#include "flowcast/stats/distributions.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace flowcast::stats {

/// Intercept plus one 0/1 indicator per non-reference category.
///
/// Observation k belongs to category `category_of[k]` in 1..category_count.
/// The reference category has no indicator column; its mean is the intercept.
class DummyDesign
{
  public:
    DummyDesign(std::vector<int> category_of, int category_count, int reference)
        : category_of_(std::move(category_of)), count_(category_count), reference_(reference)
    {
        if (count_ < 2)
            throw InputError("dummy design needs at least 2 categories");
        if (reference_ < 1 || reference_ > count_)
            throw InputError("reference category " + std::to_string(reference_) + " out of range 1.." +
                             std::to_string(count_));
        for (int c : category_of_)
            if (c < 1 || c > count_)
                throw InputError("category " + std::to_string(c) + " out of range 1.." + std::to_string(count_));
    }

    /// Reference defaults to the last category.
    DummyDesign(std::vector<int> category_of, int category_count)
        : DummyDesign(std::move(category_of), category_count, category_count)
    {}

    Eigen::Index observations() const { return static_cast<Eigen::Index>(category_of_.size()); }
    int category_count() const { return count_; }
    int reference() const { return reference_; }
    const std::vector<int>& category_of() const { return category_of_; }

    /// Category represented by indicator column `k` (0-based, excluding the intercept).
    int category_of_column(int k) const { return k + 1 < reference_ ? k + 1 : k + 2; }
    /// Indicator column of a non-reference category, -1 for the reference.
    int column_of_category(int category) const
    {
        if (category == reference_)
            return -1;
        return category < reference_ ? category - 1 : category - 2;
    }

    /// Observations per category, index 0 unused.
    std::vector<Eigen::Index> category_sizes() const
    {
        std::vector<Eigen::Index> n(static_cast<std::size_t>(count_) + 1, 0);
        for (int c : category_of_)
            ++n[static_cast<std::size_t>(c)];
        return n;
    }

    /// n x P model matrix: column 0 is the intercept, columns 1.. the indicators.
    template <typename Scalar = double>
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> matrix() const
    {
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> x =
            Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(observations(), count_);
        x.col(0).setOnes();
        for (Eigen::Index i = 0; i < observations(); ++i) {
            const int col = column_of_category(category_of_[static_cast<std::size_t>(i)]);
            if (col >= 0)
                x(i, col + 1) = Scalar(1);
        }
        return x;
    }

  private:
    std::vector<int> category_of_;
    int count_;
    int reference_;
};

template <typename Scalar = double>
struct CoefficientStats
{
    Scalar standard_error = 0;
    Scalar t_stat = 0;
    Scalar p_value = 1;
};

template <typename Scalar = double>
struct OlsFit
{
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Scalar intercept = 0;
    /// One entry per non-reference category, in category order.
    Vector coefficients;
    CoefficientStats<Scalar> intercept_stats;
    std::vector<CoefficientStats<Scalar>> coef_stats;

    Scalar r2 = 0;
    Scalar adj_r2 = 0;
    Scalar multiple_r = 0;
    Scalar residual_se = 0;
    Scalar ss_regression = 0;
    Scalar ss_residual = 0;
    Scalar ss_total = 0;
    int df_regression = 0;
    int df_residual = 0;
    Scalar f_stat = 0;
    Scalar f_significance = 1;
    Eigen::Index observations = 0;
    /// Zero total or zero residual variation; ratios follow the conventions of `safe_ratio`.
    bool degenerate = false;
};

/// num / den with den == 0 mapped to 0 (num == 0) or a signed infinity.
template <typename Scalar>
Scalar safe_ratio(Scalar num, Scalar den)
{
    if (den != Scalar(0))
        return num / den;
    if (num == Scalar(0))
        return Scalar(0);
    return std::copysign(std::numeric_limits<Scalar>::infinity(), num);
}

/// 1 - (1 - r2)(n - 1)/(n - parameters), where `parameters` counts the intercept.
inline double adjusted_r2(double r2, long observations, long parameters)
{
    if (observations <= parameters)
        throw InputError("adjusted R^2 needs more observations than parameters");
    return 1.0 - (1.0 - r2) * static_cast<double>(observations - 1) / static_cast<double>(observations - parameters);
}

/// Regression ANOVA row values (Excel-style "ANOVA" block of a regression summary).
struct RegressionAnova
{
    double ms_regression = 0;
    double ms_residual = 0;
    double f_stat = 0;
    double f_significance = 1;
    double residual_se = 0;
};

inline RegressionAnova regression_anova(double ss_regression, double ss_residual, int df_regression,
                                        int df_residual)
{
    if (df_regression < 1 || df_residual < 1)
        throw InputError("regression ANOVA needs positive degrees of freedom");
    RegressionAnova out;
    out.ms_regression = ss_regression / df_regression;
    out.ms_residual = ss_residual / df_residual;
    out.residual_se = std::sqrt(out.ms_residual);
    out.f_stat = safe_ratio(out.ms_regression, out.ms_residual);
    out.f_significance = f_tail(out.f_stat, df_regression, df_residual);
    return out;
}

/// Least squares fit of y on a dummy design by the normal equations
/// X'X b = X'y, solved with partial-pivoting LU.
template <typename Scalar>
OlsFit<Scalar> ols_dummy_fit(const Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& y,
                             const DummyDesign& design)
{
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    const Eigen::Index n = design.observations();
    const int p = design.category_count();
    if (y.size() != n)
        throw InputError("response has " + std::to_string(y.size()) + " values, design has " + std::to_string(n));
    if (!y.allFinite())
        throw InputError("response contains non-finite values");
    if (n <= p)
        throw InputError("need more observations (" + std::to_string(n) + ") than parameters (" + std::to_string(p) +
                         ")");
    const auto sizes = design.category_sizes();
    for (int c = 1; c <= p; ++c)
        if (sizes[static_cast<std::size_t>(c)] == 0)
            throw RankDeficientError("rank-deficient design: category " + std::to_string(c) + " has no observations");

    const Matrix x = design.matrix<Scalar>();
    const Matrix xtx = x.transpose() * x;
    const Vector xty = x.transpose() * y;
    const Eigen::PartialPivLU<Matrix> lu(xtx);
    const Vector beta = lu.solve(xty);
    const Matrix xtx_inv = lu.inverse();

    OlsFit<Scalar> fit;
    fit.observations = n;
    fit.intercept = beta(0);
    fit.coefficients = beta.tail(p - 1);

    const Vector fitted = x * beta;
    const Scalar mean = y.mean();
    fit.ss_residual = (y - fitted).squaredNorm();
    fit.ss_regression = (fitted.array() - mean).square().sum();
    fit.ss_total = (y.array() - mean).square().sum();
    fit.df_regression = p - 1;
    fit.df_residual = static_cast<int>(n - p);

    const Scalar ms_residual = fit.ss_residual / Scalar(fit.df_residual);
    fit.residual_se = std::sqrt(ms_residual);

    // Variation below rounding level of the data counts as exactly zero.
    const Scalar tiny = Scalar(64) * std::numeric_limits<Scalar>::epsilon() * y.squaredNorm();
    const bool no_total = fit.ss_total <= tiny;
    const bool no_residual = fit.ss_residual <= tiny;
    fit.degenerate = no_total || no_residual;

    if (no_total) {
        fit.r2 = 0;
        fit.adj_r2 = 0;
        fit.f_stat = 0;
        fit.f_significance = 1;
    } else {
        fit.r2 = fit.ss_regression / fit.ss_total;
        fit.adj_r2 = Scalar(adjusted_r2(static_cast<double>(fit.r2), static_cast<long>(n), p));
        const Scalar ms_regression = fit.ss_regression / Scalar(fit.df_regression);
        fit.f_stat = no_residual ? std::numeric_limits<Scalar>::infinity() : ms_regression / ms_residual;
        fit.f_significance = Scalar(f_tail(static_cast<double>(fit.f_stat), fit.df_regression, fit.df_residual));
    }
    fit.multiple_r = std::sqrt(fit.r2);

    auto stats_for = [&](Eigen::Index k) {
        CoefficientStats<Scalar> s;
        s.standard_error = std::sqrt(ms_residual * xtx_inv(k, k));
        if (no_residual)
            s.standard_error = 0;
        s.t_stat = safe_ratio(beta(k), s.standard_error);
        s.p_value = Scalar(t_tail_two_sided(static_cast<double>(s.t_stat), fit.df_residual));
        return s;
    };
    fit.intercept_stats = stats_for(0);
    fit.coef_stats.reserve(static_cast<std::size_t>(p - 1));
    for (int k = 1; k < p; ++k)
        fit.coef_stats.push_back(stats_for(k));
    return fit;
}

/// Observations in `values` are matched with `design` by position.
template <typename Scalar>
OlsFit<Scalar> ols_dummy_fit(const std::vector<Scalar>& values, const DummyDesign& design)
{
    const Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> y(values.data(),
                                                                       static_cast<Eigen::Index>(values.size()));
    return ols_dummy_fit<Scalar>(y, design);
}

} // namespace flowcast::stats
