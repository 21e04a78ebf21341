#pragma once

// Tail probabilities of the F and Student t distributions through the
// regularized incomplete beta function I_x(a, b).

namespace flowcast::stats {

inline constexpr double kBetaTolerance = 1e-14;
inline constexpr int kBetaMaxIterations = 500;

/// I_x(a, b) for a, b > 0 and x in [0, 1]. Throws ConvergenceError when the
/// continued fraction does not settle within kBetaMaxIterations.
double incomplete_beta(double a, double b, double x);

/// ln I_x(a, b). Stays finite where I_x itself would underflow.
double log_incomplete_beta(double a, double b, double x);

/// P(F(df1, df2) > f).
double f_tail(double f, double df1, double df2);
/// P(F(df1, df2) <= f).
double f_cdf(double f, double df1, double df2);
double log_f_tail(double f, double df1, double df2);

/// P(|T(df)| > |t|).
double t_tail_two_sided(double t, double df);
double log_t_tail_two_sided(double t, double df);

} // namespace flowcast::stats
