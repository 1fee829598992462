#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cifcompare/step_function.hpp"

namespace cifcompare {

enum class Status : std::uint8_t { Censored = 0, Cause1 = 1, Cause2 = 2 };

/// One observation: delayed entry time, exit time and what happened at exit.
struct Subject {
  double entry = 0.0;
  double exit = 0.0;
  Status status = Status::Censored;

  friend bool operator==(const Subject&, const Subject&) = default;
};

enum class TiePolicy { Jitter, Reject };

/// A validated group of subjects. Exit times are pairwise distinct.
class Sample {
 public:
  const std::vector<Subject>& subjects() const noexcept { return subjects_; }
  std::size_t size() const noexcept { return subjects_.size(); }
  const std::string& label() const noexcept { return label_; }

 private:
  friend Sample validate_sample(std::vector<Subject>, TiePolicy, std::uint64_t, std::string);
  Sample(std::vector<Subject> subjects, std::string label)
      : subjects_(std::move(subjects)), label_(std::move(label)) {}

  std::vector<Subject> subjects_;
  std::string label_;
};

/// Checks durations and breaks exit-time ties.
///
/// Under `TiePolicy::Jitter` every tied exit receives independent N(0, sd^2)
/// noise with sd = 1e-6 * (range of exit times), or 1e-6 * max(|exit|, 1)
/// when all exits coincide. The noise stream is seeded by `seed`, so the
/// result is reproducible. Subject order is preserved.
Sample validate_sample(std::vector<Subject> raw, TiePolicy policy = TiePolicy::Jitter,
                       std::uint64_t seed = 0, std::string label = {});

struct CountingProcesses {
  StepFunction at_risk;  // left-continuous: Y(t) = #{entry < t <= exit}
  StepFunction cause1;   // N_1, right-continuous
  StepFunction cause2;   // N_2, right-continuous
};

CountingProcesses risk_and_counting(const Sample& sample);

/// Product-limit estimate of P(T > t), all causes pooled.
StepFunction kaplan_meier(const Sample& sample);

/// Aalen-Johansen estimate of the cumulative incidence of `cause` (1 or 2).
StepFunction aalen_johansen(const Sample& sample, int cause);

/// Estimator values at each observed event, in time order.
struct EventRow {
  double time = 0.0;
  Status cause = Status::Cause1;
  double at_risk = 0.0;          // Y(u)
  double survival_before = 1.0;  // S(u-)
  double survival = 1.0;         // S(u)
  double cif1 = 0.0;             // F_1(u)
  double cif2 = 0.0;             // F_2(u)
};

/// One pass over a sample producing every estimator at its event times.
/// Covariance and bootstrap code work from this table.
class EventTable {
 public:
  explicit EventTable(const Sample& sample);

  std::span<const EventRow> rows() const noexcept { return rows_; }
  std::size_t sample_size() const noexcept { return n_; }
  std::size_t count(Status cause) const noexcept;

  StepFunction survival_function() const;
  StepFunction cif(int cause) const;

 private:
  std::vector<EventRow> rows_;
  std::size_t n_ = 0;
};

/// Closed analysis interval [lower, upper].
struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

/// Strictly increasing time points spanning an analysis interval.
class Grid {
 public:
  Grid() = default;
  explicit Grid(std::vector<double> points);

  std::span<const double> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }
  double lower() const { return points_.front(); }
  double upper() const { return points_.back(); }
  bool contains(double t) const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::vector<double> points_;
};

/// Sorted union of the interval endpoints and every event time of either
/// sample inside the interval. With `check_risk_set`, each sample must still
/// have a subject at risk at the right endpoint.
Grid event_grid(const Sample& sample1, const Sample& sample2, Interval interval,
                bool check_risk_set = true);

/// Y(t) for a single time, counted directly.
double at_risk_at(const Sample& sample, double t);

}  // namespace cifcompare
