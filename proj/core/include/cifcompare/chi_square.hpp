#pragma once

namespace cifcompare {

/// Regularized lower incomplete gamma function P(a, x), a > 0, x >= 0.
double regularized_gamma_p(double a, double x);

/// Upper tail Q(a, x) = 1 - P(a, x), computed without cancellation.
double regularized_gamma_q(double a, double x);

/// CDF and survival function of the chi-square law with (real) df > 0.
double chi2_cdf(double df, double x);
double chi2_sf(double df, double x);

/// x with chi2_cdf(df, x) = p, for df > 0 and 0 < p < 1.
double chi2_quantile(double df, double p);

}  // namespace cifcompare
