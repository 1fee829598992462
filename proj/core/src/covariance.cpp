#include "cifcompare/covariance.hpp"

#include <algorithm>
#include <cmath>

#include "cifcompare/errors.hpp"

namespace cifcompare {

CovGrid::CovGrid(Grid grid, std::vector<double> matrix)
    : grid_(std::move(grid)), matrix_(std::move(matrix)) {
  const std::size_t m = grid_.size();
  if (matrix_.size() != m * m) {
    throw Error(ErrorKind::GridMismatch, "covariance matrix does not match the grid size");
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (matrix_[i * m + j] != matrix_[j * m + i]) {
        throw Error(ErrorKind::InvalidArgument, "covariance matrix must be symmetric");
      }
    }
  }
}

CovGrid group_covariance(const Sample& sample, const Grid& grid) {
  return group_covariance(EventTable(sample), grid);
}

CovGrid group_covariance(const EventTable& table, const Grid& grid) {
  const auto rows = table.rows();
  for (const auto& r : rows) {
    if (r.time >= grid.lower() && r.time <= grid.upper() && !grid.contains(r.time)) {
      throw Error(ErrorKind::GridMismatch, "grid misses event time " + std::to_string(r.time));
    }
  }

  const std::size_t m = grid.size();
  const double n = static_cast<double>(table.sample_size());

  // F1 on the grid, then for every grid point s
  //   D(s) = sum_{u <= s} (a(u) - F1(s))^2 / Y(u)^2
  //   E(s) = sum_{u <= s} (a(u) - F1(s)) / Y(u)^2
  // so that zeta(s1, s2) = n (D(s1) + (F1(s1) - F1(s2)) E(s1)) for s1 <= s2.
  std::vector<double> f1(m);
  std::vector<double> d(m, 0.0);
  std::vector<double> e(m, 0.0);
  std::size_t next = 0;
  double current_f1 = 0.0;
  for (std::size_t g = 0; g < m; ++g) {
    const double s = grid[g];
    while (next < rows.size() && rows[next].time <= s) current_f1 = rows[next++].cif1;
    f1[g] = current_f1;
    double dsum = 0.0;
    double esum = 0.0;
    for (std::size_t k = 0; k < next; ++k) {
      const auto& r = rows[k];
      if (r.at_risk <= 0.0) continue;
      const double a = r.cause == Status::Cause1 ? 1.0 - r.cif2 : r.cif1;
      const double y2 = r.at_risk * r.at_risk;
      const double diff = a - current_f1;
      dsum += diff * diff / y2;
      esum += diff / y2;
    }
    d[g] = dsum;
    e[g] = esum;
  }

  std::vector<double> matrix(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    matrix[i * m + i] = n * d[i];
    for (std::size_t j = i + 1; j < m; ++j) {
      const double v = n * (d[i] + (f1[i] - f1[j]) * e[i]);
      matrix[i * m + j] = v;
      matrix[j * m + i] = v;
    }
  }
  return CovGrid(grid, std::move(matrix));
}

CovGrid pooled_covariance(const CovGrid& z1, const CovGrid& z2, std::size_t n1, std::size_t n2) {
  if (!(z1.grid() == z2.grid())) throw Error(ErrorKind::GridMismatch, "pooled covariances need identical grids");
  if (n1 == 0 || n2 == 0) throw Error(ErrorKind::EmptySample, "group sizes must be positive");
  const double n = static_cast<double>(n1 + n2);
  const double w1 = static_cast<double>(n2) / n;
  const double w2 = static_cast<double>(n1) / n;
  const auto a = z1.data();
  const auto b = z2.data();
  std::vector<double> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = w1 * a[k] + w2 * b[k];
  return CovGrid(z1.grid(), std::move(out));
}

CovGrid coarsen(const CovGrid& z, std::size_t max_points) {
  const std::size_t m = z.dim();
  if (max_points < 2 || m <= max_points) return z;
  const std::size_t interior = m - 2;
  const std::size_t slots = max_points - 2;
  const std::size_t stride = slots == 0 ? interior + 1 : (interior + slots - 1) / slots;

  std::vector<std::size_t> keep{0};
  for (std::size_t i = 1; i + 1 < m; i += stride) keep.push_back(i);
  keep.push_back(m - 1);

  std::vector<double> points;
  points.reserve(keep.size());
  for (std::size_t i : keep) points.push_back(z.grid()[i]);
  std::vector<double> matrix(keep.size() * keep.size());
  for (std::size_t a = 0; a < keep.size(); ++a) {
    for (std::size_t b = 0; b < keep.size(); ++b) matrix[a * keep.size() + b] = z(keep[a], keep[b]);
  }
  return CovGrid(Grid(std::move(points)), std::move(matrix));
}

CovarianceMoments covariance_moments(const CovGrid& z, const Weight& rho2) {
  if (!rho2.bounded()) {
    throw Error(ErrorKind::InadmissibleWeight,
                "the Anderson-Darling weight has no weighted chi-square representation");
  }
  const auto& grid = z.grid();
  const std::size_t m = z.dim();

  // Cells with zero weight (the right endpoint) drop out of every sum.
  std::vector<std::size_t> idx;
  std::vector<double> w;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double wi = rho2.integral(grid[i], grid[i + 1]);
    if (wi > 0.0) {
      idx.push_back(i);
      w.push_back(wi);
    }
  }
  const std::size_t k = idx.size();

  // A = W^(1/2) Z W^(1/2); mu = tr A, sigma2 = 2 tr A^2, gamma = tr A^3.
  std::vector<double> a(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    const double si = std::sqrt(w[i]);
    for (std::size_t j = 0; j < k; ++j) a[i * k + j] = si * z(idx[i], idx[j]) * std::sqrt(w[j]);
  }

  CovarianceMoments out;
  for (std::size_t i = 0; i < k; ++i) out.mu += a[i * k + i];

  double sq = 0.0;
  for (double v : a) sq += v * v;
  out.sigma2 = 2.0 * sq;

  // tr A^3 = sum_ij (A^2)_ij A_ji; A^2 row by row keeps memory at O(k).
  std::vector<double> row(k);
  double cube = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    std::fill(row.begin(), row.end(), 0.0);
    for (std::size_t l = 0; l < k; ++l) {
      const double ail = a[i * k + l];
      if (ail == 0.0) continue;
      const double* al = &a[l * k];
      for (std::size_t j = 0; j < k; ++j) row[j] += ail * al[j];
    }
    for (std::size_t j = 0; j < k; ++j) cube += row[j] * a[j * k + i];
  }
  out.gamma = cube;
  return out;
}

}  // namespace cifcompare
