#include "cifcompare/statistics.hpp"

#include <cmath>

#include "cifcompare/errors.hpp"

namespace cifcompare {

std::string_view to_string(StatisticKind kind) {
  switch (kind) {
    case StatisticKind::KS: return "ks";
    case StatisticKind::CvM: return "cvm";
    case StatisticKind::CvMStud: return "cvm_stud";
    case StatisticKind::Pepe: return "pepe";
  }
  return "unknown";
}

double scale_factor(std::size_t n1, std::size_t n2) {
  const double a = static_cast<double>(n1);
  const double b = static_cast<double>(n2);
  return std::sqrt(a * b / (a + b));
}

DiffProcess w_process(const Sample& sample1, const Sample& sample2, const Grid& grid) {
  return w_process(EventTable(sample1), EventTable(sample2), grid);
}

DiffProcess w_process(const EventTable& table1, const EventTable& table2, const Grid& grid) {
  const auto f1 = table1.cif(1).evaluate_sorted(grid.points());
  const auto f2 = table2.cif(1).evaluate_sorted(grid.points());
  const double c = scale_factor(table1.sample_size(), table2.sample_size());
  DiffProcess d{grid, std::vector<double>(grid.size()), table1.sample_size(), table2.sample_size()};
  for (std::size_t i = 0; i < grid.size(); ++i) d.values[i] = c * (f1[i] - f2[i]);
  return d;
}

std::vector<double> cell_weights(const Grid& grid, const Weight& rho) {
  std::vector<double> cells(grid.size(), 0.0);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) cells[i] = rho.integral(grid[i], grid[i + 1]);
  return cells;
}

double ks_value(const std::vector<double>& values, const std::vector<double>& point_weights) {
  double best = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = point_weights[i] * std::abs(values[i]);
    if (v > best) best = v;
  }
  return best;
}

double cvm_value(const std::vector<double>& values, const std::vector<double>& cells) {
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) sum += cells[i] * values[i] * values[i];
  return sum;
}

double pepe_value(const std::vector<double>& values, const std::vector<double>& cells) {
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) sum += cells[i] * values[i];
  return sum;
}

Statistic ks_stat(const DiffProcess& d, const Weight& rho1) {
  if (!rho1.bounded()) {
    throw Error(ErrorKind::InadmissibleWeight, "the supremum statistic needs a bounded weight");
  }
  std::vector<double> pw(d.grid.size());
  for (std::size_t i = 0; i < pw.size(); ++i) pw[i] = rho1.value(d.grid[i]);
  return {StatisticKind::KS, ks_value(d.values, pw)};
}

Statistic cvm_stat(const DiffProcess& d, const Weight& rho2) {
  return {StatisticKind::CvM, cvm_value(d.values, cell_weights(d.grid, rho2))};
}

Statistic pepe_stat(const DiffProcess& d, const Weight& rho2) {
  return {StatisticKind::Pepe, pepe_value(d.values, cell_weights(d.grid, rho2))};
}

Statistic studentize_cvm(double t_cvm, double mu, double sigma2) {
  if (!(sigma2 > kDegenerateTolerance)) {
    throw Error(ErrorKind::DegenerateVariance, "estimated variance of the CvM statistic is zero");
  }
  return {StatisticKind::CvMStud, (t_cvm - mu) / std::sqrt(sigma2)};
}

}  // namespace cifcompare
