#include "cifcompare/weight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cifcompare/errors.hpp"

namespace cifcompare {

Weight Weight::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw Error(ErrorKind::InadmissibleWeight, "constant weight must be positive and finite");
  }
  Weight w;
  w.kind_ = Kind::Constant;
  w.constant_ = c;
  return w;
}

Weight Weight::anderson_darling(double t1, double t2) {
  if (!(t1 < t2)) throw Error(ErrorKind::InvalidInterval, "Anderson-Darling weight needs t1 < t2");
  Weight w;
  w.kind_ = Kind::AndersonDarling;
  w.t1_ = t1;
  w.t2_ = t2;
  return w;
}

Weight Weight::tabulated(std::vector<double> times, std::vector<double> values) {
  if (times.empty() || times.size() != values.size()) {
    throw Error(ErrorKind::InadmissibleWeight, "tabulated weight needs matching non-empty tables");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw Error(ErrorKind::InadmissibleWeight, "tabulated weight values must be positive");
    }
    if (i > 0 && !(times[i - 1] < times[i])) {
      throw Error(ErrorKind::InadmissibleWeight, "tabulated weight times must increase");
    }
  }
  Weight w;
  w.kind_ = Kind::Tabulated;
  w.times_ = std::move(times);
  w.values_ = std::move(values);
  return w;
}

std::string Weight::name() const {
  switch (kind_) {
    case Kind::Constant: return "const";
    case Kind::AndersonDarling: return "ad";
    case Kind::Tabulated: return "tabulated";
  }
  return "unknown";
}

double Weight::value(double t) const {
  switch (kind_) {
    case Kind::Constant:
      return constant_;
    case Kind::AndersonDarling: {
      const double prod = (t2_ - t) * (t - t1_);
      return prod > 0.0 ? 1.0 / std::sqrt(prod) : std::numeric_limits<double>::infinity();
    }
    case Kind::Tabulated: {
      if (t <= times_.front()) return values_.front();
      if (t >= times_.back()) return values_.back();
      auto it = std::upper_bound(times_.begin(), times_.end(), t);
      const std::size_t j = static_cast<std::size_t>(it - times_.begin());
      const double frac = (t - times_[j - 1]) / (times_[j] - times_[j - 1]);
      return values_[j - 1] + frac * (values_[j] - values_[j - 1]);
    }
  }
  return 0.0;
}

double Weight::integral(double a, double b) const {
  if (!(b > a)) return 0.0;
  switch (kind_) {
    case Kind::Constant:
      return constant_ * (b - a);
    case Kind::AndersonDarling: {
      // 2 asin(sqrt((u - t1)/(t2 - t1))), written with atan2 to stay accurate near both ends
      auto antiderivative = [&](double u) {
        const double v = std::clamp(u, t1_, t2_);
        return 2.0 * std::atan2(std::sqrt(v - t1_), std::sqrt(t2_ - v));
      };
      return antiderivative(b) - antiderivative(a);
    }
    case Kind::Tabulated: {
      // piecewise linear, so the trapezoid rule between knots is exact
      std::vector<double> cuts{a};
      for (double t : times_) {
        if (t > a && t < b) cuts.push_back(t);
      }
      cuts.push_back(b);
      double sum = 0.0;
      for (std::size_t i = 1; i < cuts.size(); ++i) {
        sum += 0.5 * (value(cuts[i - 1]) + value(cuts[i])) * (cuts[i] - cuts[i - 1]);
      }
      return sum;
    }
  }
  return 0.0;
}

}  // namespace cifcompare
