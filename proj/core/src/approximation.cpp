#include "cifcompare/approximation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cifcompare/chi_square.hpp"
#include "cifcompare/errors.hpp"
#include "cifcompare/statistics.hpp"

namespace cifcompare {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha", "must lie in (0, 1)");
}

// The approximations define a test through a critical value only; the p-value
// is the tail of the fitted law at the observed statistic.
constexpr const char* kPValueNote = "p-value read off the fitted chi-square law";

TestResult degenerate(const char* method, double t_cvm) {
  TestResult r;
  r.method = method;
  r.statistic = t_cvm;
  r.critical = std::numeric_limits<double>::infinity();
  r.p_value = 1.0;
  r.reject = false;
  r.notes.push_back("degenerate covariance moments (no events); test not rejected");
  return r;
}

}  // namespace

BoxParams box_params(double mu, double sigma2) {
  if (!(mu > 0.0) || !(sigma2 > 0.0)) throw Error(ErrorKind::InvalidArgument, "Box moments must be positive");
  return {2.0 * mu * mu / sigma2, sigma2 / (2.0 * mu)};
}

PearsonParams pearson_params(double sigma2, double gamma) {
  if (!(sigma2 > 0.0) || !(gamma > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "Pearson moments must be positive");
  }
  return {sigma2 * sigma2 * sigma2 / (8.0 * gamma * gamma)};
}

TestResult box_test(double t_cvm, double mu, double sigma2, double alpha) {
  check_alpha(alpha);
  if (!(mu > kDegenerateTolerance) || !(sigma2 > kDegenerateTolerance)) return degenerate("box", t_cvm);
  const BoxParams bp = box_params(mu, sigma2);
  TestResult r;
  r.method = "box";
  r.statistic = t_cvm;
  r.critical = bp.g * chi2_quantile(bp.f, 1.0 - alpha);
  r.reject = t_cvm > r.critical;
  r.p_value = std::clamp(chi2_sf(bp.f, t_cvm / bp.g), 0.0, 1.0);
  r.extras = {{"f", bp.f}, {"g", bp.g}, {"mu", mu}, {"sigma2", sigma2}};
  r.notes.push_back(kPValueNote);
  return r;
}

TestResult pearson_test(double t_cvm, double mu, double sigma2, double gamma, double alpha) {
  check_alpha(alpha);
  if (!(mu > kDegenerateTolerance) || !(sigma2 > kDegenerateTolerance)) return degenerate("pearson", t_cvm);
  if (!(gamma > 0.0)) {
    TestResult r = box_test(t_cvm, mu, sigma2, alpha);
    r.method = "pearson";
    r.extras["fallback_box"] = 1.0;
    r.extras["gamma"] = gamma;
    r.notes.push_back("non-positive third-moment estimate; Box approximation used");
    return r;
  }
  const PearsonParams pp = pearson_params(sigma2, gamma);
  const double kappa = pp.kappa;
  const double spread = std::sqrt(2.0 * kappa);
  const double t_stud = studentize_cvm(t_cvm, mu, sigma2).value;

  TestResult r;
  r.method = "pearson";
  r.statistic = t_stud;
  r.critical = (chi2_quantile(kappa, 1.0 - alpha) - kappa) / spread;
  r.reject = t_stud > r.critical;
  const double arg = kappa + t_stud * spread;
  // The CvM statistic is non-negative, so a zero statistic has p = 1 whatever
  // the fitted support.
  r.p_value = (arg <= 0.0 || t_cvm <= 0.0) ? 1.0 : std::clamp(chi2_sf(kappa, arg), 0.0, 1.0);
  r.extras = {{"kappa", kappa}, {"mu", mu}, {"sigma2", sigma2}, {"gamma", gamma}, {"t_cvm", t_cvm}};
  r.notes.push_back(kPValueNote);
  return r;
}

}  // namespace cifcompare
