#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cifcompare/survival.hpp"
#include "cifcompare/weight.hpp"

namespace cifcompare {

/// Symmetric covariance kernel tabulated on a grid. Between grid points the
/// kernel is read from the lower-left grid corner, i.e. on the cell
/// [g_i, g_{i+1}) x [g_j, g_{j+1}) it equals the entry (i, j).
class CovGrid {
 public:
  CovGrid() = default;
  /// `matrix` is row-major, size() x size() of the grid; must be symmetric.
  CovGrid(Grid grid, std::vector<double> matrix);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t dim() const noexcept { return grid_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return matrix_[i * dim() + j]; }
  std::span<const double> data() const noexcept { return matrix_; }

 private:
  Grid grid_;
  std::vector<double> matrix_;
};

/// Per-group covariance estimate
///   n * sum over events u <= s1 ^ s2 of (a(u) - F1(s1)) (a(u) - F1(s2)) / Y(u)^2
/// with a(u) = 1 - F2(u) at cause-1 events and a(u) = F1(u) at cause-2 events.
/// Throws GridMismatch if the grid misses an event time inside its range.
CovGrid group_covariance(const Sample& sample, const Grid& grid);
CovGrid group_covariance(const EventTable& table, const Grid& grid);

/// (n2/n) z1 + (n1/n) z2.
CovGrid pooled_covariance(const CovGrid& z1, const CovGrid& z2, std::size_t n1, std::size_t n2);

/// Restricts the kernel to every k-th grid point (endpoints kept) so that at
/// most `max_points` remain. This is an approximation for large grids.
CovGrid coarsen(const CovGrid& z, std::size_t max_points);

struct CovarianceMoments {
  double mu = 0.0;      // integral of rho(s) z(s, s)
  double sigma2 = 0.0;  // 2 * double integral of rho z^2 rho
  double gamma = 0.0;   // triple integral of rho z rho z rho z (cyclic)
};

/// Moments of the weighted chi-square limit, by exact summation over grid
/// cells. The Anderson-Darling weight is rejected (InadmissibleWeight).
CovarianceMoments covariance_moments(const CovGrid& z, const Weight& rho2);

}  // namespace cifcompare
