#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "cifcompare/covariance.hpp"
#include "cifcompare/errors.hpp"
#include "cifcompare/resampling.hpp"

using namespace cifcompare;

namespace {

Sample make(std::vector<Subject> s, std::string label = "g") {
  return validate_sample(std::move(s), TiePolicy::Reject, 0, std::move(label));
}

// Bootstrap process written out from the oracle estimators.
double oracle_bootstrap(const std::vector<Subject>& r1, const std::vector<double>& g1,
                        const std::vector<Subject>& r2, const std::vector<double>& g2, double t) {
  auto part = [&](const std::vector<Subject>& r, const std::vector<double>& g) {
    std::vector<Subject> events;
    for (const auto& x : r)
      if (x.status != Status::Censored) events.push_back(x);
    std::sort(events.begin(), events.end(), [](const Subject& a, const Subject& b) { return a.exit < b.exit; });
    const double f1 = oracle::cif(r, 1, t);
    double sum = 0.0;
    for (std::size_t i = 0; i < events.size(); ++i) {
      const double u = events[i].exit;
      if (u > t) break;
      const double a = events[i].status == Status::Cause1 ? 1.0 - oracle::cif(r, 2, u) : oracle::cif(r, 1, u);
      sum += g[i] * (a - f1) / oracle::at_risk(r, u);
    }
    return sum;
  };
  const double n1 = static_cast<double>(r1.size()), n2 = static_cast<double>(r2.size());
  return std::sqrt(n1 * n2 / (n1 + n2)) * (part(r1, g1) - part(r2, g2));
}

}  // namespace

TEST_SUITE("multipliers") {
  TEST_CASE("Rademacher support") {
    Rng rng(1);
    for (double v : draw_multipliers(MultiplierLaw::Rademacher, 10000, rng)) CHECK((v == 1.0 || v == -1.0));
  }

  TEST_CASE("standard normal mean") {
    Rng rng(2);
    const auto v = draw_multipliers(MultiplierLaw::StandardNormal, 1000000, rng);
    CHECK(std::abs(std::accumulate(v.begin(), v.end(), 0.0) / 1e6) < 0.005);
  }

  TEST_CASE("centred Poisson support and mean") {
    Rng rng(3);
    const auto v = draw_multipliers(MultiplierLaw::CenteredPoisson1, 1000000, rng);
    for (std::size_t i = 0; i < 1000; ++i) CHECK((v[i] >= -1.0 && v[i] == std::floor(v[i])));
    CHECK(std::abs(std::accumulate(v.begin(), v.end(), 0.0) / 1e6) < 0.005);
  }

  TEST_CASE("law names round-trip") {
    for (auto law : {MultiplierLaw::StandardNormal, MultiplierLaw::Rademacher, MultiplierLaw::CenteredPoisson1})
      CHECK(parse_multiplier_law(to_string(law)) == law);
    CHECK_THROWS_AS(parse_multiplier_law("gamma"), ConfigError);
  }
}

TEST_SUITE("bootstrap process") {
  TEST_CASE("zero multipliers give zero") {
    std::mt19937_64 rng(4);
    const Sample a = make(oracle::random_subjects(rng, 10, true, false));
    const Sample b = make(oracle::random_subjects(rng, 12, true, false));
    const Grid g = event_grid(a, b, {0, 1}, false);
    const EventTable ta(a), tb(b);
    const Multipliers m{std::vector<double>(ta.rows().size(), 0.0), std::vector<double>(tb.rows().size(), 0.0)};
    for (double v : bootstrap_process(a, b, g, m).values) CHECK(v == 0.0);
  }

  TEST_CASE("one cause-1 event") {
    const double mult = 1.7;
    {
      const Sample a = make({{0, 1, Status::Cause1}});
      const Sample b = make({{0, 3, Status::Censored}});
      const auto w = bootstrap_process(a, b, Grid({0, 1, 2}), Multipliers{{mult}, {}});
      // (1 - F2(1) - F1(s)) / Y(1) vanishes once F1 has jumped to 1.
      for (double v : w.values) CHECK(v == 0.0);
    }
    {
      const Sample a = make({{0, 1, Status::Cause1}, {0, 2, Status::Censored}});
      const Sample b = make({{0, 3, Status::Censored}});
      const auto w = bootstrap_process(a, b, Grid({0, 1, 2}), Multipliers{{mult}, {}});
      const double scale = std::sqrt(2.0 / 3.0);
      CHECK(w.values[0] == 0.0);
      CHECK(w.values[1] == doctest::Approx(scale * mult * (1.0 - 0.5) / 2.0));
      CHECK(w.values[2] == doctest::Approx(scale * mult * (1.0 - 0.5) / 2.0));
    }
  }

  TEST_CASE("agrees with the written-out sum") {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> normal;
    for (int rep = 0; rep < 20; ++rep) {
      const auto r1 = oracle::random_subjects(rng, 15, true, true);
      const auto r2 = oracle::random_subjects(rng, 12, true, false);
      const Sample a = make(r1), b = make(r2);
      const Grid g = event_grid(a, b, {0.0, 1.3}, false);
      Multipliers m;
      m.group1.resize(EventTable(a).rows().size());
      m.group2.resize(EventTable(b).rows().size());
      for (double& v : m.group1) v = normal(rng);
      for (double& v : m.group2) v = normal(rng);
      const auto w = bootstrap_process(a, b, g, m);
      for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(w.values[i] == doctest::Approx(oracle_bootstrap(r1, m.group1, r2, m.group2, g[i])).epsilon(1e-11).scale(1e-12));
    }
  }

  TEST_CASE("multiplier count mismatch") {
    const Sample a = make({{0, 1, Status::Cause1}});
    const Sample b = make({{0, 3, Status::Censored}});
    try {
      bootstrap_process(a, b, Grid({0, 2}), Multipliers{{1.0, 2.0}, {}});
      FAIL("expected MultiplierCountMismatch");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::MultiplierCountMismatch);
    }
  }

  TEST_CASE("conditional mean zero and variance equal to the pooled covariance") {
    std::mt19937_64 rng(8);
    const std::size_t reps = 10000;
    for (int data = 0; data < 3; ++data) {
      const Sample a = make(oracle::random_subjects(rng, 40, true, true), "a");
      const Sample b = make(oracle::random_subjects(rng, 30, true, false), "b");
      const Grid g = event_grid(a, b, {0.0, 1.0}, false);
      const EventTable ta(a), tb(b);
      const BootstrapEngine engine(ta, tb, g);
      const CovGrid z = pooled_covariance(group_covariance(ta, g), group_covariance(tb, g), a.size(), b.size());
      std::vector<double> sum(g.size(), 0.0), sum2(g.size(), 0.0), out;
      BootstrapConfig cfg;
      cfg.seed = 100 + data;
      const auto keys = group_stream_keys(a.label(), b.label());
      for (std::size_t r = 0; r < reps; ++r) {
        const Multipliers m = replicate_multipliers(cfg, r, keys, ta.rows().size(), tb.rows().size());
        engine.replicate(m.group1, m.group2, out);
        for (std::size_t i = 0; i < g.size(); ++i) {
          sum[i] += out[i];
          sum2[i] += out[i] * out[i];
        }
      }
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double zeta = z(i, i);
        if (zeta < 1e-8) continue;
        const double mean = sum[i] / reps;
        const double var = sum2[i] / reps - mean * mean;
        CHECK(std::abs(mean) <= 4.0 * std::sqrt(zeta / reps));
        CHECK(var == doctest::Approx(zeta).epsilon(0.05));
      }
    }
  }
}

TEST_SUITE("bootstrap tests") {
  TEST_CASE("critical rank") {
    CHECK(critical_rank(999, 0.05) == 950);
    CHECK(critical_rank(1000, 0.05) == 951);
    CHECK(critical_rank(99, 0.05) == 95);
    CHECK(critical_rank(19, 0.05) == 19);
    CHECK(critical_rank(10, 0.01) == 10);
    CHECK(critical_rank(999, 0.5) == 500);
  }

  TEST_CASE("identical samples never reject") {
    std::mt19937_64 rng(10);
    const auto raw = oracle::random_subjects(rng, 30, true, true);
    const Sample a = make(raw, "a"), b = make(raw, "b");
    BootstrapConfig cfg;
    cfg.replicates = 199;
    for (auto kind : {StatisticKind::KS, StatisticKind::CvM, StatisticKind::Pepe}) {
      const TestResult r = bootstrap_test(a, b, {0, 1}, kind, Weight::constant(), cfg);
      CHECK(r.statistic == 0.0);
      if (kind != StatisticKind::Pepe) CHECK(r.p_value == 1.0);
      CHECK_FALSE(r.reject);
    }
  }

  TEST_CASE("deterministic and independent of the thread count") {
    std::mt19937_64 rng(12);
    const Sample a = make(oracle::random_subjects(rng, 40, true, false), "a");
    const Sample b = make(oracle::random_subjects(rng, 35, true, true), "b");
    BootstrapConfig cfg;
    cfg.replicates = 299;
    cfg.seed = 77;
    const TestResult r1 = bootstrap_test(a, b, {0, 1}, StatisticKind::CvM, Weight::constant(), cfg);
    const TestResult r2 = bootstrap_test(a, b, {0, 1}, StatisticKind::CvM, Weight::constant(), cfg);
    cfg.threads = 3;
    const TestResult r3 = bootstrap_test(a, b, {0, 1}, StatisticKind::CvM, Weight::constant(), cfg);
    for (const TestResult* r : {&r2, &r3}) {
      CHECK(r->statistic == r1.statistic);
      CHECK(r->critical == r1.critical);
      CHECK(r->p_value == r1.p_value);
      CHECK(r->reject == r1.reject);
    }
    cfg.threads = 1;
    cfg.seed = 78;
    const TestResult r4 = bootstrap_test(a, b, {0, 1}, StatisticKind::CvM, Weight::constant(), cfg);
    CHECK(r4.critical != r1.critical);
  }

  TEST_CASE("critical value is non-increasing in alpha") {
    std::mt19937_64 rng(14);
    const Sample a = make(oracle::random_subjects(rng, 40, true, false), "a");
    const Sample b = make(oracle::random_subjects(rng, 35, true, true), "b");
    BootstrapConfig cfg;
    cfg.replicates = 499;
    double last = INFINITY;
    for (double alpha : {0.01, 0.05, 0.1, 0.2, 0.5}) {
      cfg.alpha = alpha;
      const double c = bootstrap_test(a, b, {0, 1}, StatisticKind::KS, Weight::constant(), cfg).critical;
      CHECK(c <= last);
      last = c;
    }
  }

  TEST_CASE("p-values of exchangeable replicates are super-uniform") {
    std::mt19937_64 rng(16);
    const Sample a = make(oracle::random_subjects(rng, 40, true, false), "a");
    const Sample b = make(oracle::random_subjects(rng, 35, true, true), "b");
    const Grid g = event_grid(a, b, {0, 1}, false);
    const EventTable ta(a), tb(b);
    const BootstrapEngine engine(ta, tb, g);
    const auto cells = cell_weights(g, Weight::constant());
    BootstrapConfig cfg;
    const std::size_t total = 1000;
    const auto keys = group_stream_keys("a", "b");
    std::vector<double> stats(total), out;
    for (std::size_t r = 0; r < total; ++r) {
      const auto m = replicate_multipliers(cfg, r, keys, ta.rows().size(), tb.rows().size());
      engine.replicate(m.group1, m.group2, out);
      stats[r] = cvm_value(out, cells);
    }
    // Treat each replicate in turn as the observed statistic.
    std::vector<double> p(total);
    for (std::size_t i = 0; i < total; ++i) {
      std::size_t ge = 0;
      for (std::size_t j = 0; j < total; ++j)
        if (j != i && stats[j] >= stats[i]) ++ge;
      p[i] = (1.0 + static_cast<double>(ge)) / static_cast<double>(total);
    }
    for (double x : {0.01, 0.05, 0.1, 0.25, 0.5, 0.9}) {
      const double frac = static_cast<double>(std::count_if(p.begin(), p.end(), [&](double v) { return v <= x; })) / total;
      CHECK(frac <= x + 1e-12);
    }
  }

  TEST_CASE("Pepe uses the upper tail of the signed statistic") {
    std::vector<Subject> high, low;
    for (int i = 1; i <= 30; ++i) {
      high.push_back({0, 0.02 * i, i % 4 == 0 ? Status::Cause2 : Status::Cause1});
      low.push_back({0, 0.02 * i + 0.001, i % 4 == 0 ? Status::Cause1 : Status::Cause2});
    }
    const Sample h = make(high, "h"), l = make(low, "l");
    BootstrapConfig cfg;
    cfg.replicates = 199;
    const TestResult up = bootstrap_test(h, l, {0, 0.5}, StatisticKind::Pepe, Weight::constant(), cfg);
    const TestResult down = bootstrap_test(l, h, {0, 0.5}, StatisticKind::Pepe, Weight::constant(), cfg);
    CHECK(up.statistic > 0.0);
    CHECK(up.reject);
    CHECK(up.p_value < 0.05);
    CHECK(down.statistic == -up.statistic);
    CHECK_FALSE(down.reject);
    CHECK(down.p_value > 0.95);
  }

  TEST_CASE("no cause-1 events in either sample") {
    const Sample a = make({{0, 1, Status::Cause2}, {0, 2, Status::Censored}}, "a");
    const Sample b = make({{0, 1.5, Status::Cause2}, {0, 3, Status::Censored}}, "b");
    BootstrapConfig cfg;
    cfg.replicates = 99;
    const TestResult r = bootstrap_test(a, b, {0, 1.8}, StatisticKind::CvM, Weight::constant(), cfg);
    CHECK(r.p_value == 1.0);
    CHECK_FALSE(r.reject);
    CHECK_FALSE(r.notes.empty());
  }

  TEST_CASE("configuration errors name the field") {
    BootstrapConfig cfg;
    cfg.alpha = 1.5;
    try {
      validate(cfg);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.field() == "alpha");
    }
    cfg.alpha = 0.05;
    cfg.replicates = 0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
  }
}
