#pragma once

#include <string_view>
#include <vector>

#include "cifcompare/covariance.hpp"
#include "cifcompare/resampling.hpp"
#include "cifcompare/statistics.hpp"

namespace cifcompare {

/// Test procedures for equality of the cause-1 CIFs.
enum class Method { KS, CvM, Box, Pearson, Pepe };

std::string_view to_string(Method method);
Method parse_method(std::string_view text);
/// Comma-separated list, e.g. "ks,cvm,box,pearson,pepe".
std::vector<Method> parse_methods(std::string_view text);
const std::vector<Method>& all_methods();

struct AnalysisOptions {
  std::vector<Method> methods = all_methods();
  Weight rho1 = Weight::constant();
  Weight rho2 = Weight::constant();
  BootstrapConfig bootstrap;
  /// Coarsen the covariance grid to at most this many points (0 = never).
  std::size_t max_grid = 0;
};

struct Analysis {
  DiffProcess w;
  CovarianceMoments moments;
  bool moments_computed = false;
  std::vector<TestResult> results;  // in the order of AnalysisOptions::methods
};

/// Runs every requested method on one pair of samples. The bootstrap tests
/// share one set of replicates.
Analysis analyze(const Sample& sample1, const Sample& sample2, const Grid& grid,
                 const AnalysisOptions& options);

}  // namespace cifcompare
