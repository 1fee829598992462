#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "cifcompare/survival.hpp"
#include "cifcompare/weight.hpp"

namespace cifcompare {

/// Scaled difference of the two cause-1 CIF estimates,
/// sqrt(n1 n2 / n) (F1^(1) - F1^(2)), tabulated on a grid. It is constant on
/// each cell [g_i, g_{i+1}).
struct DiffProcess {
  Grid grid;
  std::vector<double> values;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

enum class StatisticKind { KS, CvM, CvMStud, Pepe };

std::string_view to_string(StatisticKind kind);

struct Statistic {
  StatisticKind kind = StatisticKind::KS;
  double value = 0.0;
};

double scale_factor(std::size_t n1, std::size_t n2);

DiffProcess w_process(const Sample& sample1, const Sample& sample2, const Grid& grid);
DiffProcess w_process(const EventTable& table1, const EventTable& table2, const Grid& grid);

/// max over grid points of rho1(g) |W(g)|. Exact for constant weights; for
/// other bounded weights the supremum is only searched on the grid.
Statistic ks_stat(const DiffProcess& d, const Weight& rho1);

/// Integral of rho2 W^2 over the interval, summed cell by cell.
Statistic cvm_stat(const DiffProcess& d, const Weight& rho2);

/// Signed integral of rho2 W over the interval.
Statistic pepe_stat(const DiffProcess& d, const Weight& rho2);

/// (t_cvm - mu) / sqrt(sigma2). Throws DegenerateVariance if sigma2 <= 1e-12.
Statistic studentize_cvm(double t_cvm, double mu, double sigma2);

inline constexpr double kDegenerateTolerance = 1e-12;

/// Cell integrals of a weight over a grid; the last entry (right endpoint) is 0.
std::vector<double> cell_weights(const Grid& grid, const Weight& rho);

/// Statistic evaluated from precomputed grid values, shared with the
/// bootstrap loop. `cells` come from `cell_weights`; `point_weights` hold
/// rho1 at the grid points.
double ks_value(const std::vector<double>& values, const std::vector<double>& point_weights);
double cvm_value(const std::vector<double>& values, const std::vector<double>& cells);
double pepe_value(const std::vector<double>& values, const std::vector<double>& cells);

}  // namespace cifcompare
