#include "cifcompare/step_function.hpp"

#include <algorithm>
#include <cmath>

#include "cifcompare/errors.hpp"

namespace cifcompare {

StepFunction::StepFunction(double initial, std::vector<double> jump_times,
                           std::vector<double> values, Continuity continuity)
    : initial_(initial),
      jump_times_(std::move(jump_times)),
      values_(std::move(values)),
      continuity_(continuity) {
  if (jump_times_.size() != values_.size()) {
    throw Error(ErrorKind::InvalidArgument, "step function needs one value per jump time");
  }
  for (std::size_t i = 0; i < jump_times_.size(); ++i) {
    if (!std::isfinite(jump_times_[i])) {
      throw Error(ErrorKind::InvalidArgument, "step function jump times must be finite");
    }
    if (i > 0 && !(jump_times_[i - 1] < jump_times_[i])) {
      throw Error(ErrorKind::InvalidArgument, "step function jump times must be strictly increasing");
    }
  }
}

double StepFunction::value_at_or_before(double t) const {
  auto it = std::upper_bound(jump_times_.begin(), jump_times_.end(), t);
  if (it == jump_times_.begin()) return initial_;
  return values_[static_cast<std::size_t>(it - jump_times_.begin()) - 1];
}

double StepFunction::value_strictly_before(double t) const {
  auto it = std::lower_bound(jump_times_.begin(), jump_times_.end(), t);
  if (it == jump_times_.begin()) return initial_;
  return values_[static_cast<std::size_t>(it - jump_times_.begin()) - 1];
}

double StepFunction::operator()(double t) const {
  return continuity_ == Continuity::Right ? value_at_or_before(t) : value_strictly_before(t);
}

double StepFunction::left_limit(double t) const { return value_strictly_before(t); }

std::vector<double> StepFunction::evaluate_sorted(std::span<const double> points) const {
  std::vector<double> out;
  out.reserve(points.size());
  std::size_t next = 0;
  double current = initial_;
  for (double t : points) {
    if (continuity_ == Continuity::Right) {
      while (next < jump_times_.size() && jump_times_[next] <= t) current = values_[next++];
    } else {
      while (next < jump_times_.size() && jump_times_[next] < t) current = values_[next++];
    }
    out.push_back(current);
  }
  return out;
}

}  // namespace cifcompare
