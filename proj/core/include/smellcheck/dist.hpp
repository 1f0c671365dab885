#pragma once

// Probability distribution plumbing shared by the regression and test-battery
// code: standard normal CDF/quantile and the chi-square CDF via the
// regularized incomplete gamma function. Absolute error is below 1e-10 on the
// ranges the library uses (chi-square arguments in [0, 50], normal |z| < 40).

namespace smellcheck::dist {

// Regularized lower incomplete gamma P(a, x); Q(a, x) = 1 - P(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Standard normal.
double normal_cdf(double z);
// Upper tail, accurate for large z where 1 - cdf would cancel.
double normal_sf(double z);
// Inverse CDF. p must lie in (0, 1).
double normal_quantile(double p);

// Chi-square with df degrees of freedom.
double chi_square_cdf(double x, double df);
// Upper tail; this is the p-value helper the Wald/LR tests use.
double chi_square_sf(double x, double df);

}  // namespace smellcheck::dist
