#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cifcompare/rng.hpp"
#include "cifcompare/statistics.hpp"
#include "cifcompare/survival.hpp"
#include "cifcompare/weight.hpp"

namespace cifcompare {

/// Law of the wild-bootstrap multipliers. All three have mean 0, variance 1
/// and a finite fourth moment.
enum class MultiplierLaw { StandardNormal, Rademacher, CenteredPoisson1 };

std::string_view to_string(MultiplierLaw law);
MultiplierLaw parse_multiplier_law(std::string_view text);

struct BootstrapConfig {
  std::size_t replicates = 999;
  MultiplierLaw law = MultiplierLaw::StandardNormal;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  /// Worker threads for the replicate loop; 0 means hardware concurrency.
  /// The result does not depend on this value.
  unsigned threads = 1;
};

/// Throws ConfigError when replicates == 0 or alpha is outside (0, 1).
void validate(const BootstrapConfig& config);

struct TestResult {
  std::string method;
  double statistic = 0.0;
  double critical = 0.0;
  double p_value = 1.0;
  bool reject = false;
  std::map<std::string, double> extras;
  std::vector<std::string> notes;
};

std::vector<double> draw_multipliers(MultiplierLaw law, std::size_t count, Rng& rng);

/// One multiplier per observed event of each group, in event-time order.
struct Multipliers {
  std::vector<double> group1;
  std::vector<double> group2;
};

/// Precomputed pieces of the wild-bootstrap process for a fixed data set and
/// grid. Each replicate costs O(events + grid points).
class BootstrapEngine {
 public:
  BootstrapEngine(const EventTable& table1, const EventTable& table2, const Grid& grid);

  std::size_t multiplier_count(int group) const;
  const Grid& grid() const noexcept { return grid_; }

  /// Writes the bootstrap process at the grid points into `out`.
  void replicate(std::span<const double> g1, std::span<const double> g2, std::vector<double>& out) const;

 private:
  struct Term {
    std::size_t bin;     // first grid point at or after the event
    double centre;       // (1 - F2(u)) for cause 1, F1(u) for cause 2, over Y(u)
    double inverse_risk; // 1 / Y(u)
  };
  struct Group {
    std::vector<Term> terms;  // indexed like the event rows
    std::vector<double> cif1_on_grid;
    std::size_t multipliers = 0;
  };

  void accumulate(const Group& group, std::span<const double> g, double sign,
                  std::vector<double>& out) const;

  Grid grid_;
  std::array<Group, 2> groups_;
  double scale_ = 0.0;
};

/// Wild-bootstrap version of the difference process for given multipliers.
/// Throws MultiplierCountMismatch if a group's multiplier count differs from
/// its number of observed events.
DiffProcess bootstrap_process(const Sample& sample1, const Sample& sample2, const Grid& grid,
                              const Multipliers& multipliers);

struct StatisticRequest {
  StatisticKind kind = StatisticKind::CvM;
  Weight weight = Weight::constant();
};

/// Multiplier-stream keys for two groups: hashes of distinct labels, or the
/// positions 1 and 2 when the labels coincide. Keying by label makes the
/// bootstrap draws follow a group when the two samples are swapped.
std::array<std::uint64_t, 2> group_stream_keys(std::string_view label1, std::string_view label2);

/// Draws the multipliers of replicate `b`.
Multipliers replicate_multipliers(const BootstrapConfig& config, std::size_t b,
                                  const std::array<std::uint64_t, 2>& keys, std::size_t count1,
                                  std::size_t count2);

/// Runs several bootstrap tests on one set of replicates. Critical value is the
/// ceil((1 - alpha)(B + 1))-th smallest replicate; p = (1 + #{T* >= T}) / (B + 1).
/// KS and CvM are two-sided by construction; Pepe uses the upper tail of the
/// signed statistic. If neither sample has a cause-1 event up to t2 every
/// test returns reject = false and p = 1.
std::vector<TestResult> bootstrap_tests(const EventTable& table1, const EventTable& table2,
                                        const Grid& grid, std::span<const StatisticRequest> requests,
                                        const BootstrapConfig& config,
                                        const std::array<std::uint64_t, 2>& stream_keys);

TestResult bootstrap_test(const Sample& sample1, const Sample& sample2, Interval interval,
                          StatisticKind kind, const Weight& weight, const BootstrapConfig& config,
                          bool check_risk_set = true);

/// 1-based order-statistic index used for the critical value.
std::size_t critical_rank(std::size_t replicates, double alpha);

}  // namespace cifcompare
