#pragma once

namespace mam {

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

/// P(F <= x) for the F distribution with (df1, df2) degrees of freedom.
/// Degrees of freedom may be non-integer (Satterthwaite approximations).
double f_cdf(double x, double df1, double df2);

/// Inverse of f_cdf in its first argument, p in (0,1).
double f_quantile(double p, double df1, double df2);

} // namespace mam
