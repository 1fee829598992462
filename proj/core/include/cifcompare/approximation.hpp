#pragma once

#include "cifcompare/resampling.hpp"

namespace cifcompare {

/// Scaled chi-square g * chi2_f matching a given mean and variance.
struct BoxParams {
  double f = 0.0;
  double g = 0.0;
};

/// Studentized chi2_kappa matching mean, variance and skewness.
struct PearsonParams {
  double kappa = 0.0;
};

/// f = 2 mu^2 / sigma2, g = sigma2 / (2 mu).
BoxParams box_params(double mu, double sigma2);

/// kappa = sigma2^3 / (8 gamma^2).
PearsonParams pearson_params(double sigma2, double gamma);

/// Rejects when t_cvm exceeds the (1 - alpha)-quantile of g chi2_f.
/// Degenerate moments (mu or sigma2 <= 1e-12) give reject = false, p = 1.
TestResult box_test(double t_cvm, double mu, double sigma2, double alpha);

/// Rejects when (t_cvm - mu) / sigma exceeds the (1 - alpha)-quantile of
/// (chi2_kappa - kappa) / sqrt(2 kappa). Falls back to `box_test` when
/// gamma <= 0, recording "fallback_box" in the extras.
TestResult pearson_test(double t_cvm, double mu, double sigma2, double gamma, double alpha);

}  // namespace cifcompare
