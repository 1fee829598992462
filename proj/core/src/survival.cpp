#include "cifcompare/survival.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "cifcompare/errors.hpp"

namespace cifcompare {

namespace {

constexpr int kMaxJitterAttempts = 100;

bool exits_distinct(const std::vector<Subject>& subjects) {
  std::vector<double> exits;
  exits.reserve(subjects.size());
  for (const auto& s : subjects) exits.push_back(s.exit);
  std::sort(exits.begin(), exits.end());
  return std::adjacent_find(exits.begin(), exits.end()) == exits.end();
}

std::vector<bool> tied_mask(const std::vector<Subject>& subjects) {
  std::map<double, int> counts;
  for (const auto& s : subjects) ++counts[s.exit];
  std::vector<bool> mask(subjects.size());
  for (std::size_t i = 0; i < subjects.size(); ++i) mask[i] = counts[subjects[i].exit] > 1;
  return mask;
}

}  // namespace

Sample validate_sample(std::vector<Subject> raw, TiePolicy policy, std::uint64_t seed,
                       std::string label) {
  if (raw.empty()) throw Error(ErrorKind::EmptySample, "sample '" + label + "' has no subjects");

  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto& s = raw[i];
    if (!std::isfinite(s.entry) || !std::isfinite(s.exit) || s.entry < 0.0) {
      throw Error(ErrorKind::InvalidTime,
                  "subject " + std::to_string(i) + " has a negative or non-finite time");
    }
    if (!(s.exit > s.entry)) {
      throw Error(ErrorKind::NonPositiveDuration,
                  "subject " + std::to_string(i) + " exits at or before entry");
    }
    if (s.status != Status::Censored && s.status != Status::Cause1 && s.status != Status::Cause2) {
      throw Error(ErrorKind::InvalidArgument, "subject " + std::to_string(i) + " has unknown status");
    }
  }

  if (exits_distinct(raw)) return Sample(std::move(raw), std::move(label));

  if (policy == TiePolicy::Reject) {
    throw Error(ErrorKind::TiesPresent, "sample '" + label + "' has tied exit times");
  }

  auto [lo, hi] = std::minmax_element(raw.begin(), raw.end(),
                                      [](const Subject& a, const Subject& b) { return a.exit < b.exit; });
  double scale = hi->exit - lo->exit;
  if (scale <= 0.0) scale = std::max(std::abs(hi->exit), 1.0);
  const double sd = 1e-6 * scale;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sd);
  const std::vector<Subject> original = raw;
  const std::vector<bool> tied = tied_mask(original);

  for (int attempt = 0; attempt < kMaxJitterAttempts; ++attempt) {
    bool ok = true;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (!tied[i]) continue;
      raw[i].exit = original[i].exit + noise(rng);
      if (!(raw[i].exit > raw[i].entry) || raw[i].exit < 0.0) ok = false;
    }
    if (ok && exits_distinct(raw)) return Sample(std::move(raw), std::move(label));
  }
  throw Error(ErrorKind::TiesPresent, "could not break ties in sample '" + label + "'");
}

CountingProcesses risk_and_counting(const Sample& sample) {
  // Y is left-continuous: +1 just after each entry, -1 just after each exit.
  std::map<double, double> risk_delta;
  std::map<double, double> jumps1;
  std::map<double, double> jumps2;
  for (const auto& s : sample.subjects()) {
    risk_delta[s.entry] += 1.0;
    risk_delta[s.exit] -= 1.0;
    if (s.status == Status::Cause1) jumps1[s.exit] += 1.0;
    if (s.status == Status::Cause2) jumps2[s.exit] += 1.0;
  }

  auto accumulate = [](const std::map<double, double>& deltas, Continuity continuity) {
    std::vector<double> times;
    std::vector<double> values;
    double level = 0.0;
    for (const auto& [t, d] : deltas) {
      if (d == 0.0) continue;
      level += d;
      times.push_back(t);
      values.push_back(level);
    }
    return StepFunction(0.0, std::move(times), std::move(values), continuity);
  };

  return {accumulate(risk_delta, Continuity::Left), accumulate(jumps1, Continuity::Right),
          accumulate(jumps2, Continuity::Right)};
}

EventTable::EventTable(const Sample& sample) : n_(sample.size()) {
  const auto& subjects = sample.subjects();
  std::vector<double> entries;
  std::vector<double> exits;
  entries.reserve(subjects.size());
  exits.reserve(subjects.size());
  std::vector<const Subject*> events;
  for (const auto& s : subjects) {
    entries.push_back(s.entry);
    exits.push_back(s.exit);
    if (s.status != Status::Censored) events.push_back(&s);
  }
  std::sort(entries.begin(), entries.end());
  std::sort(exits.begin(), exits.end());
  std::sort(events.begin(), events.end(),
            [](const Subject* a, const Subject* b) { return a->exit < b->exit; });

  rows_.reserve(events.size());
  double survival = 1.0;
  double cif1 = 0.0;
  double cif2 = 0.0;
  for (const Subject* e : events) {
    const double u = e->exit;
    // #{entry < u} - #{exit < u}
    const auto entered = std::lower_bound(entries.begin(), entries.end(), u) - entries.begin();
    const auto left = std::lower_bound(exits.begin(), exits.end(), u) - exits.begin();
    const double at_risk = static_cast<double>(entered - left);

    EventRow row;
    row.time = u;
    row.cause = e->status;
    row.at_risk = at_risk;
    row.survival_before = survival;
    if (at_risk > 0.0) {
      const double increment = survival / at_risk;
      if (e->status == Status::Cause1) {
        cif1 += increment;
      } else {
        cif2 += increment;
      }
      survival -= increment;
    }
    row.survival = survival;
    row.cif1 = cif1;
    row.cif2 = cif2;
    rows_.push_back(row);
  }
}

std::size_t EventTable::count(Status cause) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(rows_.begin(), rows_.end(), [cause](const EventRow& r) { return r.cause == cause; }));
}

StepFunction EventTable::survival_function() const {
  std::vector<double> times;
  std::vector<double> values;
  for (const auto& r : rows_) {
    if (r.survival == r.survival_before) continue;
    times.push_back(r.time);
    values.push_back(r.survival);
  }
  return StepFunction(1.0, std::move(times), std::move(values));
}

StepFunction EventTable::cif(int cause) const {
  if (cause != 1 && cause != 2) throw Error(ErrorKind::InvalidArgument, "cause must be 1 or 2");
  const Status wanted = cause == 1 ? Status::Cause1 : Status::Cause2;
  std::vector<double> times;
  std::vector<double> values;
  double last = 0.0;
  for (const auto& r : rows_) {
    if (r.cause != wanted) continue;
    const double v = cause == 1 ? r.cif1 : r.cif2;
    if (v == last) continue;
    times.push_back(r.time);
    values.push_back(v);
    last = v;
  }
  return StepFunction(0.0, std::move(times), std::move(values));
}

StepFunction kaplan_meier(const Sample& sample) { return EventTable(sample).survival_function(); }

StepFunction aalen_johansen(const Sample& sample, int cause) { return EventTable(sample).cif(cause); }

Grid::Grid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw Error(ErrorKind::InvalidInterval, "grid needs at least two points");
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i - 1] < points_[i])) {
      throw Error(ErrorKind::InvalidInterval, "grid points must be strictly increasing");
    }
  }
}

bool Grid::contains(double t) const { return std::binary_search(points_.begin(), points_.end(), t); }

double at_risk_at(const Sample& sample, double t) {
  double count = 0.0;
  for (const auto& s : sample.subjects()) {
    if (s.entry < t && t <= s.exit) count += 1.0;
  }
  return count;
}

Grid event_grid(const Sample& sample1, const Sample& sample2, Interval interval, bool check_risk_set) {
  if (!(interval.lower < interval.upper) || !std::isfinite(interval.lower) ||
      !std::isfinite(interval.upper) || interval.lower < 0.0) {
    throw Error(ErrorKind::InvalidInterval, "interval must satisfy 0 <= t1 < t2 < inf");
  }
  if (check_risk_set) {
    for (const Sample* s : {&sample1, &sample2}) {
      if (at_risk_at(*s, interval.upper) < 1.0) {
        throw Error(ErrorKind::EmptyRiskSet,
                    "no subject of group '" + s->label() + "' is at risk at t2 = " +
                        std::to_string(interval.upper));
      }
    }
  }
  std::vector<double> points{interval.lower, interval.upper};
  for (const Sample* s : {&sample1, &sample2}) {
    for (const auto& subj : s->subjects()) {
      if (subj.status != Status::Censored && subj.exit >= interval.lower && subj.exit <= interval.upper) {
        points.push_back(subj.exit);
      }
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return Grid(std::move(points));
}

}  // namespace cifcompare
