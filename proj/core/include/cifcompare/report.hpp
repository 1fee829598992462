#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cifcompare/dataset.hpp"
#include "cifcompare/two_sample.hpp"

namespace cifcompare {

std::string_view version();

std::string_view to_string(TiePolicy policy);
TiePolicy parse_tie_policy(std::string_view text);

struct RunOptions {
  /// Default: [0, min over groups of the largest event time].
  std::optional<Interval> interval;
  std::vector<Method> methods = all_methods();
  /// Weight of the CvM-type statistics: "const" or "ad". KS is unweighted.
  std::string weight = "const";
  BootstrapConfig bootstrap;
  TiePolicy tie_policy = TiePolicy::Jitter;
  std::size_t max_grid = 0;
  /// Turn an empty risk set at t2 under a user interval into an error
  /// instead of a warning.
  bool strict_risk_set = false;
};

struct GroupSummary {
  std::string label;
  std::size_t size = 0;
  std::size_t cause1 = 0;
  std::size_t cause2 = 0;
  std::size_t censored = 0;
};

struct Provenance {
  std::string version;
  std::uint64_t seed = 0;
  std::size_t replicates = 0;
  double alpha = 0.05;
  std::string multiplier;
  Interval interval;
  bool default_interval = true;
  std::string weight_ks;
  std::string weight_cvm;
  std::string tie_policy;
  std::vector<std::string> methods;
  std::size_t max_grid = 0;
};

struct ReportBundle {
  std::array<GroupSummary, 2> groups;
  std::vector<TestResult> results;
  /// Cause-1 CIF of each group on the analysis grid.
  std::vector<double> grid;
  std::array<std::vector<double>, 2> cif;
  Provenance provenance;
  std::vector<std::string> warnings;
};

ReportBundle run_test(const Dataset& dataset, const RunOptions& options);

/// Deterministic JSON rendering (no timings).
std::string to_json(const ReportBundle& bundle);
/// Human-readable table; every number is printed exactly as in the JSON.
std::string to_table(const ReportBundle& bundle);

/// Vertices (time, cause-1 CIF) of the step function on [lower, upper]:
/// the starting value, the value after every jump, and the end value.
std::vector<std::pair<double, double>> cif_vertices(const Sample& sample, double lower, double upper);

/// Writes one `cif_<label>.csv` per group into `dir` and returns the paths.
/// Without an interval each curve spans [0, largest exit time of its group].
std::vector<std::filesystem::path> emit_plot_data(const Dataset& dataset, std::optional<Interval> interval,
                                                  TiePolicy policy, std::uint64_t seed,
                                                  const std::filesystem::path& dir);

}  // namespace cifcompare
