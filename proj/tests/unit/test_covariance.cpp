#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "oracles.hpp"

#include "cifcompare/covariance.hpp"
#include "cifcompare/errors.hpp"
#include "cifcompare/weight.hpp"

using namespace cifcompare;

namespace {

Sample make(std::vector<Subject> s) { return validate_sample(std::move(s), TiePolicy::Reject); }

double min_eigenvalue(const CovGrid& z) {
  const auto m = static_cast<Eigen::Index>(z.dim());
  Eigen::MatrixXd a(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) a(i, j) = z(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
}

double trace(const CovGrid& z) {
  double t = 0.0;
  for (std::size_t i = 0; i < z.dim(); ++i) t += z(i, i);
  return t;
}

CovGrid tabulate(const Grid& g, auto&& kernel) {
  std::vector<double> m(g.size() * g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) m[i * g.size() + j] = kernel(g[i], g[j]);
  return CovGrid(g, std::move(m));
}

Grid uniform_grid(double lo, double hi, std::size_t points) {
  std::vector<double> p(points);
  for (std::size_t i = 0; i < points; ++i) p[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  p.back() = hi;
  return Grid(std::move(p));
}

}  // namespace

TEST_SUITE("group_covariance") {
  TEST_CASE("no events gives the zero kernel") {
    const Sample s = make({{0, 1, Status::Censored}, {0, 2, Status::Censored}});
    const CovGrid z = group_covariance(s, Grid({0.0, 1.5}));
    for (double v : z.data()) CHECK(v == 0.0);
  }

  TEST_CASE("two subjects against the direct double sum") {
    const std::vector<Subject> raw{{0, 1, Status::Cause1}, {0, 2, Status::Cause2}};
    const Grid g({0.0, 1.0, 2.0});
    const CovGrid z = group_covariance(make(raw), g);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) CHECK(z(i, j) == doctest::Approx(oracle::zeta(raw, g[i], g[j])).epsilon(1e-13));
    // By hand: a(1) = 1 - F2(1) = 1, F1(1) = F1(2) = 1/2, Y(1) = 2, a(2) = F1(2) = 1/2, Y(2) = 1.
    CHECK(z(1, 1) == doctest::Approx(2.0 * 0.25 / 4.0));
    CHECK(z(2, 2) == doctest::Approx(2.0 * (0.25 / 4.0 + 0.0)));
  }

  TEST_CASE("random samples against the direct double sum") {
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 25; ++rep) {
      const auto raw = oracle::random_subjects(rng, 20, rep % 2 == 1, rep % 3 == 1);
      const Sample s = make(raw);
      std::vector<double> pts{0.0};
      for (double t : oracle::event_times(raw))
        if (t < 1.5) pts.push_back(t);
      pts.push_back(1.5);
      const Grid g(pts);
      const CovGrid z = group_covariance(s, g);
      for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(z(i, i) >= 0.0);
        for (std::size_t j = 0; j < g.size(); ++j) {
          CHECK(z(i, j) == doctest::Approx(oracle::zeta(raw, g[i], g[j])).epsilon(1e-10).scale(1e-12));
        }
      }
    }
  }

  TEST_CASE("grid missing an event is rejected") {
    const Sample s = make({{0, 1, Status::Cause1}, {0, 2, Status::Censored}});
    CHECK_THROWS_AS(group_covariance(s, Grid({0.0, 1.5})), Error);
  }

  TEST_CASE("symmetric and positive semi-definite") {
    std::mt19937_64 rng(37);
    for (int rep = 0; rep < 40; ++rep) {
      const auto raw1 = oracle::random_subjects(rng, 30, true, true);
      const auto raw2 = oracle::random_subjects(rng, 25, true, false);
      const Sample s1 = make(raw1);
      const Sample s2 = make(raw2);
      const Grid g = event_grid(s1, s2, {0.0, 1.2}, false);
      const CovGrid z1 = group_covariance(s1, g);
      const CovGrid z2 = group_covariance(s2, g);
      const CovGrid pooled = pooled_covariance(z1, z2, s1.size(), s2.size());
      for (const CovGrid* z : {&z1, &z2, &pooled}) {
        for (std::size_t i = 0; i < z->dim(); ++i)
          for (std::size_t j = 0; j < z->dim(); ++j) CHECK((*z)(i, j) == (*z)(j, i));
        CHECK(min_eigenvalue(*z) >= -1e-10 * std::max(trace(*z), 1e-300));
      }
    }
  }
}

TEST_SUITE("pooled_covariance") {
  const Grid g({0.0, 1.0, 2.0});
  const CovGrid a = tabulate(g, [](double s, double t) { return std::min(s, t) + 1.0; });
  const CovGrid zero = tabulate(g, [](double, double) { return 0.0; });
  const CovGrid b = tabulate(g, [](double s, double t) { return s * t; });

  TEST_CASE("zero second kernel") {
    const CovGrid p = pooled_covariance(a, zero, 30, 10);
    for (std::size_t k = 0; k < 9; ++k) CHECK(p.data()[k] == doctest::Approx(0.25 * a.data()[k]));
  }

  TEST_CASE("equal sizes average the kernels") {
    const CovGrid p = pooled_covariance(a, b, 7, 7);
    for (std::size_t k = 0; k < 9; ++k) CHECK(p.data()[k] == doctest::Approx(0.5 * (a.data()[k] + b.data()[k])));
  }

  TEST_CASE("equal kernels are reproduced") {
    const CovGrid p = pooled_covariance(a, a, 3, 11);
    for (std::size_t k = 0; k < 9; ++k) CHECK(p.data()[k] == doctest::Approx(a.data()[k]));
  }

  TEST_CASE("grid mismatch") {
    const CovGrid other = tabulate(Grid({0.0, 1.0, 3.0}), [](double, double) { return 1.0; });
    CHECK_THROWS_AS(pooled_covariance(a, other, 1, 1), Error);
  }

  TEST_CASE("asymmetric matrix is rejected") {
    CHECK_THROWS_AS(CovGrid(Grid({0.0, 1.0}), {1.0, 2.0, 3.0, 4.0}), Error);
  }
}

TEST_SUITE("covariance_moments") {
  TEST_CASE("constant kernel") {
    const double c = 0.7, len = 2.5;
    for (std::size_t points : {2u, 5u, 40u}) {
      const CovGrid z = tabulate(uniform_grid(0.0, len, points), [&](double, double) { return c; });
      const auto m = covariance_moments(z, Weight::constant());
      CHECK(m.mu == doctest::Approx(c * len).epsilon(1e-12));
      CHECK(m.sigma2 == doctest::Approx(2 * c * c * len * len).epsilon(1e-12));
      CHECK(m.gamma == doctest::Approx(c * c * c * len * len * len).epsilon(1e-12));
    }
  }

  TEST_CASE("zero kernel") {
    const auto m = covariance_moments(tabulate(uniform_grid(0, 1, 10), [](double, double) { return 0.0; }),
                                      Weight::constant());
    CHECK(m.mu == 0.0);
    CHECK(m.sigma2 == 0.0);
    CHECK(m.gamma == 0.0);
  }

  TEST_CASE("Brownian kernel matches its eigenvalue sums") {
    // Eigenvalues 4 / ((2j - 1)^2 pi^2): sums of powers 1/2, 1/6, 1/15.
    double s1 = 0, s2 = 0, s3 = 0;
    for (int j = 1; j <= 200000; ++j) {
      const double lambda = 4.0 / (std::pow(2.0 * j - 1.0, 2) * M_PI * M_PI);
      s1 += lambda;
      s2 += lambda * lambda;
      s3 += lambda * lambda * lambda;
    }
    const CovGrid z = tabulate(uniform_grid(0.0, 1.0, 1000), [](double s, double t) { return std::min(s, t); });
    const auto m = covariance_moments(z, Weight::constant());
    CHECK(m.mu == doctest::Approx(s1).epsilon(0.01));
    CHECK(m.sigma2 == doctest::Approx(2 * s2).epsilon(0.01));
    CHECK(m.gamma == doctest::Approx(s3).epsilon(0.01));
    CHECK(s1 == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(2 * s2 == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    CHECK(s3 == doctest::Approx(1.0 / 15.0).epsilon(1e-9));
  }

  TEST_CASE("scaling the kernel scales the moments by c, c^2, c^3") {
    std::mt19937_64 rng(41);
    const auto raw = oracle::random_subjects(rng, 40, true, true);
    const Sample s = make(raw);
    const CovGrid z = group_covariance(s, event_grid(s, s, {0.0, 1.0}, false));
    std::vector<double> scaled(z.data().begin(), z.data().end());
    for (double& v : scaled) v *= 2.0;
    const auto m = covariance_moments(z, Weight::constant());
    const auto m2 = covariance_moments(CovGrid(z.grid(), scaled), Weight::constant());
    CHECK(m2.mu == 2.0 * m.mu);
    CHECK(m2.sigma2 == 4.0 * m.sigma2);
    CHECK(m2.gamma == 8.0 * m.gamma);
    CHECK(m.mu >= 0.0);
    CHECK(m.sigma2 > 0.0);
  }

  TEST_CASE("sigma2 vanishes only for the zero kernel") {
    std::mt19937_64 rng(43);
    for (int rep = 0; rep < 20; ++rep) {
      const auto raw = oracle::random_subjects(rng, 15, true, false);
      const Sample s = make(raw);
      const CovGrid z = group_covariance(s, event_grid(s, s, {0.0, 1.0}, false));
      const bool all_zero = std::all_of(z.data().begin(), z.data().end(), [](double v) { return v == 0.0; });
      const auto m = covariance_moments(z, Weight::constant());
      CHECK(m.mu >= 0.0);
      CHECK(m.sigma2 >= 0.0);
      CHECK((m.sigma2 == 0.0) == all_zero);
    }
  }

  TEST_CASE("Anderson-Darling weight is inadmissible") {
    const CovGrid z = tabulate(uniform_grid(0, 1, 5), [](double s, double t) { return std::min(s, t); });
    CHECK_THROWS_AS(covariance_moments(z, Weight::anderson_darling(0, 1)), Error);
  }
}

TEST_SUITE("coarsen") {
  TEST_CASE("keeps endpoints and original entries") {
    const Grid g = uniform_grid(0.0, 3.0, 101);
    const CovGrid z = tabulate(g, [](double s, double t) { return std::min(s, t); });
    const CovGrid c = coarsen(z, 20);
    CHECK(c.dim() <= 20);
    CHECK(c.grid().lower() == 0.0);
    CHECK(c.grid().upper() == 3.0);
    for (std::size_t i = 0; i < c.dim(); ++i)
      for (std::size_t j = 0; j < c.dim(); ++j) CHECK(c(i, j) == std::min(c.grid()[i], c.grid()[j]));
    CHECK(coarsen(z, 500).dim() == 101);
  }
}
