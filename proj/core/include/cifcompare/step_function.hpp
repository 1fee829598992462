#pragma once

#include <span>
#include <vector>

namespace cifcompare {

enum class Continuity { Right, Left };

/// Piecewise-constant function of time.
///
/// `values[i]` holds on the piece that starts at `jump_times[i]`; `initial`
/// holds before the first jump. With `Continuity::Right` the value at a jump
/// time is the new value (cadlag). With `Continuity::Left` the value at a jump
/// time is still the old one, which is how the at-risk count behaves: the
/// count "at t" means the count just before t.
class StepFunction {
 public:
  StepFunction() = default;
  StepFunction(double initial, std::vector<double> jump_times, std::vector<double> values,
               Continuity continuity = Continuity::Right);

  double operator()(double t) const;
  /// Limit from the left, f(t-).
  double left_limit(double t) const;

  double initial() const noexcept { return initial_; }
  std::span<const double> jump_times() const noexcept { return jump_times_; }
  std::span<const double> values() const noexcept { return values_; }
  Continuity continuity() const noexcept { return continuity_; }
  bool empty() const noexcept { return jump_times_.empty(); }

  /// Evaluate at every point of an increasing sequence in one merge pass.
  std::vector<double> evaluate_sorted(std::span<const double> points) const;

 private:
  double value_at_or_before(double t) const;
  double value_strictly_before(double t) const;

  double initial_ = 0.0;
  std::vector<double> jump_times_;
  std::vector<double> values_;
  Continuity continuity_ = Continuity::Right;
};

}  // namespace cifcompare
