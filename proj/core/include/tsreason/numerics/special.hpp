#pragma once

namespace tsreason::numerics {

// Special functions backing the statistical tests. Accuracy target is ~1e-10
// over the argument ranges the tests produce, which is far tighter than the
// 1e-6 tolerances used on p-values downstream.

double log_gamma(double x);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double reg_inc_gamma_p(double a, double x);

/// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
double reg_inc_beta(double a, double b, double x);

double chi_square_cdf(double x, double dof);

double f_cdf(double x, double d1, double d2);

/// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} e^{-2 k^2 lambda^2}.
double ks_survival(double lambda);

}  // namespace tsreason::numerics
