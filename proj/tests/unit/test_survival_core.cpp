#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "cifcompare/errors.hpp"
#include "cifcompare/step_function.hpp"
#include "cifcompare/survival.hpp"

using namespace cifcompare;

namespace {

Sample make(std::vector<Subject> s, std::string label = "g") {
  return validate_sample(std::move(s), TiePolicy::Reject, 0, std::move(label));
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an exception");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_SUITE("step function") {
  TEST_CASE("right and left continuity at jumps") {
    const StepFunction right(0.0, {1.0, 2.0}, {1.0, 3.0});
    CHECK(right(0.5) == 0.0);
    CHECK(right(1.0) == 1.0);
    CHECK(right.left_limit(1.0) == 0.0);
    CHECK(right(5.0) == 3.0);
    const StepFunction left(2.0, {1.0, 2.0}, {1.0, 0.0}, Continuity::Left);
    CHECK(left(1.0) == 2.0);
    CHECK(left(1.5) == 1.0);
    CHECK(left(2.0) == 1.0);
    CHECK(left(2.1) == 0.0);
  }

  TEST_CASE("evaluate_sorted agrees with pointwise evaluation") {
    const StepFunction f(0.5, {0.2, 0.9, 1.4}, {1.0, 2.0, 4.0});
    const std::vector<double> pts{0.0, 0.2, 0.5, 0.9, 1.0, 1.4, 3.0};
    const auto v = f.evaluate_sorted(pts);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(v[i] == f(pts[i]));
  }

  TEST_CASE("jump times must increase") {
    CHECK_THROWS_AS(StepFunction(0.0, {1.0, 1.0}, {1.0, 2.0}), Error);
    CHECK_THROWS_AS(StepFunction(0.0, {1.0}, {1.0, 2.0}), Error);
  }
}

TEST_SUITE("validate_sample") {
  TEST_CASE("untied input is returned unchanged") {
    const std::vector<Subject> raw{{0, 1, Status::Cause1}, {0, 2, Status::Censored}};
    const Sample s = make(raw);
    CHECK(s.size() == 2);
    CHECK(s.subjects() == raw);
  }

  TEST_CASE("ties are rejected under Reject") {
    CHECK(kind_of([] { make({{0, 1, Status::Cause1}, {0, 1, Status::Cause2}}); }) == ErrorKind::TiesPresent);
  }

  TEST_CASE("jitter breaks ties reproducibly") {
    const std::vector<Subject> raw{{0, 1, Status::Cause1}, {0, 1, Status::Cause2}};
    const Sample a = validate_sample(raw, TiePolicy::Jitter, 42);
    const Sample b = validate_sample(raw, TiePolicy::Jitter, 42);
    REQUIRE(a.size() == 2);
    CHECK(a.subjects()[0].exit != a.subjects()[1].exit);
    for (const auto& x : a.subjects()) CHECK(std::abs(x.exit - 1.0) < 1e-4);
    CHECK(a.subjects() == b.subjects());
    CHECK(a.subjects()[0].status == Status::Cause1);
    CHECK(a.subjects()[1].status == Status::Cause2);
  }

  TEST_CASE("jitter leaves untied exits alone") {
    const std::vector<Subject> raw{{0, 1, Status::Cause1}, {0, 1, Status::Cause2}, {0, 3, Status::Censored}};
    const Sample a = validate_sample(raw, TiePolicy::Jitter, 7);
    CHECK(a.subjects()[2] == raw[2]);
  }

  TEST_CASE("invalid durations and times") {
    CHECK(kind_of([] { make({}); }) == ErrorKind::EmptySample);
    CHECK(kind_of([] { make({{1, 1, Status::Cause1}}); }) == ErrorKind::NonPositiveDuration);
    CHECK(kind_of([] { make({{2, 1, Status::Cause1}}); }) == ErrorKind::NonPositiveDuration);
    CHECK(kind_of([] { make({{-1, 1, Status::Cause1}}); }) == ErrorKind::InvalidTime);
    CHECK(kind_of([] { make({{0, NAN, Status::Cause1}}); }) == ErrorKind::InvalidTime);
    CHECK(kind_of([] { make({{0, INFINITY, Status::Cause1}}); }) == ErrorKind::InvalidTime);
  }
}

TEST_SUITE("risk_and_counting") {
  TEST_CASE("single subject") {
    const auto cp = risk_and_counting(make({{0, 1, Status::Cause1}}));
    CHECK(cp.at_risk(0.5) == 1.0);
    CHECK(cp.at_risk(1.0) == 1.0);
    CHECK(cp.at_risk(1.5) == 0.0);
    CHECK(cp.cause1(0.99) == 0.0);
    CHECK(cp.cause1(1.0) == 1.0);
    CHECK(cp.cause2(10.0) == 0.0);
  }

  TEST_CASE("three subjects against a brute-force count") {
    const std::vector<Subject> raw{{0, 1, Status::Cause1}, {0, 2, Status::Censored}, {0, 3, Status::Cause2}};
    const auto cp = risk_and_counting(make(raw));
    for (double t : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5}) CHECK(cp.at_risk(t) == oracle::at_risk(raw, t));
    CHECK(cp.at_risk(1.0) == 3.0);
    CHECK(cp.at_risk(2.0) == 2.0);
    CHECK(cp.at_risk(3.0) == 1.0);
    CHECK(cp.cause1(3.0) == 1.0);
    CHECK(cp.cause2(3.0) == 1.0);
  }

  TEST_CASE("delayed entry") {
    const auto cp = risk_and_counting(make({{1.5, 2, Status::Cause1}}));
    CHECK(cp.at_risk(1.0) == 0.0);
    CHECK(cp.at_risk(1.5) == 0.0);
    CHECK(cp.at_risk(2.0) == 1.0);
  }

  TEST_CASE("at-risk count matches brute force and is permutation invariant") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 50; ++rep) {
      auto raw = oracle::random_subjects(rng, 30, true, true);
      const auto cp = risk_and_counting(make(raw));
      std::shuffle(raw.begin(), raw.end(), rng);
      const auto cq = risk_and_counting(make(raw));
      for (const auto& x : raw) {
        for (double t : {x.entry, x.exit, x.exit + 1e-9}) {
          CHECK(cp.at_risk(t) == oracle::at_risk(raw, t));
          CHECK(cq.at_risk(t) == cp.at_risk(t));
          CHECK(cq.cause1(t) == cp.cause1(t));
          CHECK(cq.cause2(t) == cp.cause2(t));
        }
      }
    }
  }
}

TEST_SUITE("estimators") {
  TEST_CASE("no events gives S = 1 and F = 0") {
    const Sample s = make({{0, 1, Status::Censored}, {0, 2, Status::Censored}});
    const auto km = kaplan_meier(s);
    const auto f1 = aalen_johansen(s, 1);
    for (double t : {0.0, 1.0, 5.0}) {
      CHECK(km(t) == 1.0);
      CHECK(f1(t) == 0.0);
    }
  }

  TEST_CASE("hand product-limit example") {
    const Sample s = make({{0, 1, Status::Cause1}, {0, 2, Status::Censored}, {0, 3, Status::Cause2}});
    const auto km = kaplan_meier(s);
    CHECK(km(1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(km(2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(km(3.0) == 0.0);
    CHECK(aalen_johansen(s, 1)(3.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(aalen_johansen(s, 2)(3.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  }

  TEST_CASE("single subject and no cause-1 events") {
    const auto f1 = aalen_johansen(make({{0, 1, Status::Cause1}}), 1);
    CHECK(f1(0.999) == 0.0);
    CHECK(f1(1.0) == 1.0);
    const auto g1 = aalen_johansen(make({{0, 1, Status::Cause2}, {0, 2, Status::Censored}}), 1);
    CHECK(g1(10.0) == 0.0);
  }

  TEST_CASE("estimators agree with brute-force oracles") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 40; ++rep) {
      const auto raw = oracle::random_subjects(rng, 25, rep % 2 == 0, rep % 3 == 0);
      const Sample s = make(raw);
      const auto km = kaplan_meier(s);
      const auto f1 = aalen_johansen(s, 1);
      const auto f2 = aalen_johansen(s, 2);
      for (const auto& x : raw) {
        CHECK(km(x.exit) == doctest::Approx(oracle::survival(raw, x.exit)).epsilon(1e-12));
        CHECK(f1(x.exit) == doctest::Approx(oracle::cif(raw, 1, x.exit)).epsilon(1e-12));
        CHECK(f2(x.exit) == doctest::Approx(oracle::cif(raw, 2, x.exit)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("KM equals one minus the empirical CDF without censoring or truncation") {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 30; ++rep) {
      const auto raw = oracle::random_subjects(rng, 40, false, false);
      const auto km = kaplan_meier(make(raw));
      const double n = static_cast<double>(raw.size());
      for (const auto& x : raw) {
        const double ecdf =
            static_cast<double>(std::count_if(raw.begin(), raw.end(), [&](const Subject& y) { return y.exit <= x.exit; })) / n;
        CHECK(km(x.exit) == doctest::Approx(1.0 - ecdf).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("identity F1 + F2 = 1 - S and monotonicity on random samples") {
    std::mt19937_64 rng(23);
    for (int rep = 0; rep < 100; ++rep) {
      const auto raw = oracle::random_subjects(rng, 30, true, true);
      const Sample s = make(raw);
      const EventTable table(s);
      const auto km = table.survival_function();
      const auto f1 = table.cif(1);
      const auto f2 = table.cif(2);
      CHECK(km(0.0) == 1.0);
      CHECK(f1(0.0) == 0.0);
      double last_s = 1.0, last_f1 = 0.0, last_f2 = 0.0;
      for (const auto& row : table.rows()) {
        CHECK(std::abs(f1(row.time) + f2(row.time) - (1.0 - km(row.time))) <= 1e-12);
        CHECK(km(row.time) <= last_s);
        CHECK(f1(row.time) >= last_f1);
        CHECK(f2(row.time) >= last_f2);
        last_s = km(row.time);
        last_f1 = f1(row.time);
        last_f2 = f2(row.time);
      }
    }
  }
}

TEST_SUITE("event_grid") {
  TEST_CASE("union of endpoints and event times") {
    const Sample a = make({{0, 0.5, Status::Cause1}, {0, 1.2, Status::Cause2}, {0, 5, Status::Censored}});
    const Sample b = make({{0, 0.8, Status::Cause1}, {0, 4, Status::Censored}});
    const Grid g = event_grid(a, b, {0.0, 2.0});
    CHECK(std::vector<double>(g.points().begin(), g.points().end()) == std::vector<double>{0, 0.5, 0.8, 1.2, 2});
  }

  TEST_CASE("no events inside the interval") {
    const Sample a = make({{0, 5, Status::Cause1}});
    const Sample b = make({{0, 6, Status::Cause1}});
    const Grid g = event_grid(a, b, {0.0, 2.0});
    CHECK(g.size() == 2);
    CHECK(g.lower() == 0.0);
    CHECK(g.upper() == 2.0);
  }

  TEST_CASE("shared event time across samples appears once") {
    const Sample a = make({{0, 1, Status::Cause1}, {0, 3, Status::Censored}});
    const Sample b = make({{0, 1, Status::Cause2}, {0, 3, Status::Censored}});
    CHECK(event_grid(a, b, {0.0, 2.0}).size() == 3);
  }

  TEST_CASE("interval and risk-set errors") {
    const Sample a = make({{0, 1, Status::Cause1}});
    const Sample b = make({{0, 3, Status::Cause1}});
    CHECK(kind_of([&] { event_grid(a, b, {1.0, 1.0}); }) == ErrorKind::InvalidInterval);
    CHECK(kind_of([&] { event_grid(a, b, {-1.0, 1.0}); }) == ErrorKind::InvalidInterval);
    CHECK(kind_of([&] { event_grid(a, b, {0.0, INFINITY}); }) == ErrorKind::InvalidInterval);
    CHECK(kind_of([&] { event_grid(a, b, {0.0, 2.0}); }) == ErrorKind::EmptyRiskSet);
    CHECK_NOTHROW(event_grid(a, b, {0.0, 2.0}, false));
    CHECK_NOTHROW(event_grid(a, b, {0.0, 1.0}));
  }
}
