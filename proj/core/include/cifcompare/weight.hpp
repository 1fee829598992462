#pragma once

#include <string>
#include <vector>

namespace cifcompare {

/// Weight function on the analysis interval.
class Weight {
 public:
  enum class Kind { Constant, AndersonDarling, Tabulated };

  static Weight constant(double c = 1.0);
  /// ((t2 - u)(u - t1))^(-1/2) on (t1, t2).
  static Weight anderson_darling(double t1, double t2);
  /// Linear interpolation through (times, values), flat outside the table.
  static Weight tabulated(std::vector<double> times, std::vector<double> values);

  Kind kind() const noexcept { return kind_; }
  bool bounded() const noexcept { return kind_ != Kind::AndersonDarling; }
  std::string name() const;

  double value(double t) const;
  /// Integral over [a, b], in closed form.
  double integral(double a, double b) const;

 private:
  Kind kind_ = Kind::Constant;
  double constant_ = 1.0;
  double t1_ = 0.0;
  double t2_ = 1.0;
  std::vector<double> times_;
  std::vector<double> values_;
};

}  // namespace cifcompare
