#include "cifcompare/chi_square.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cifcompare/errors.hpp"

namespace cifcompare {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 10000;

// Series for P(a, x); converges quickly for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x) (modified Lentz); used for x >= a + 1.
double gamma_q_fraction(double a, double x) {
  constexpr double tiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

void check_gamma_args(double a, double x) {
  if (!(a > 0.0) || !std::isfinite(a)) throw Error(ErrorKind::InvalidArgument, "gamma shape must be positive");
  if (std::isnan(x) || x < 0.0) throw Error(ErrorKind::InvalidArgument, "gamma argument must be non-negative");
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
  check_gamma_args(a, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_fraction(a, x);
}

double chi2_cdf(double df, double x) {
  if (x <= 0.0) return 0.0;
  return regularized_gamma_p(0.5 * df, 0.5 * x);
}

double chi2_sf(double df, double x) {
  if (x <= 0.0) return 1.0;
  return regularized_gamma_q(0.5 * df, 0.5 * x);
}

double chi2_quantile(double df, double p) {
  if (!(df > 0.0) || !std::isfinite(df)) throw Error(ErrorKind::InvalidArgument, "df must be positive");
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::InvalidArgument, "probability must lie in (0, 1)");

  // Solve on t = log x. Upper probabilities are matched through the survival
  // function so that p close to 1 keeps full relative accuracy.
  const double a = 0.5 * df;
  const bool lower = p <= 0.5;
  const double target = lower ? p : 1.0 - p;
  auto residual = [&](double x) {
    return lower ? regularized_gamma_p(a, 0.5 * x) - target : target - regularized_gamma_q(a, 0.5 * x);
  };

  // Start from the small-x expansion P(a, y) ~ y^a / Gamma(a + 1), or the mean.
  double x = 2.0 * std::exp((std::log(p) + std::lgamma(a + 1.0)) / a);
  if (!(x > 0.0) || !std::isfinite(x) || x > df) x = df;
  x = std::max(x, std::numeric_limits<double>::min());

  double lo = std::log(x), hi = lo;
  while (residual(std::exp(lo)) > 0.0) lo -= 1.0;
  while (residual(std::exp(hi)) < 0.0) hi += 1.0;

  double t = std::clamp(std::log(x), lo, hi);
  for (int iter = 0; iter < 300; ++iter) {
    const double xt = std::exp(t);
    const double f = residual(xt);
    if (f == 0.0) return xt;
    if (f < 0.0) {
      lo = t;
    } else {
      hi = t;
    }
    // d/dt cdf(e^t) = density(x) * x
    const double log_slope = a * std::log(0.5 * xt) - 0.5 * xt - std::lgamma(a);
    double next = t - f / std::exp(log_slope);
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) <= 1e-15 || hi - lo <= 1e-15) return std::exp(next);
    t = next;
  }
  return std::exp(t);
}

}  // namespace cifcompare
