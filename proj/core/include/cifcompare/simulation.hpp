#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cifcompare/rng.hpp"
#include "cifcompare/survival.hpp"
#include "cifcompare/two_sample.hpp"

namespace cifcompare {

/// Bajorunaite-Klein model 1 with covariate Z = 1 in group 2:
///   F1(t) = p x e^(bZ) / (1 - p + p x e^(bZ)), F2(t) = (1-p) x / (1 - p + p e^(bZ)),
/// x = 1 - e^-t. beta = 0 gives equal CIFs.
struct ModelBK1 {
  double p = 0.5;
  double beta = 0.0;
};

/// Bajorunaite-Klein model 2 with causes and groups interchanged (Z = 1 in
/// group 1): F1(t) = (1 - p_k) x^(e^(bZ)), F2(t) = p_k x. The cause-1 CIFs cross.
struct ModelBK2 {
  double p1 = 0.42;
  double p2 = 0.58;
  double beta = 1.0986122886681098;  // log 3
};

/// Cause-specific hazards a1 = e^-u, a2 = 1 - e^-u in group 1 and
/// a1 = c, a2 = 2 - c in group 2; c = 1 gives equal cause-1 CIFs.
struct ModelDP3 {
  double c = 1.0;
};

using Model = std::variant<ModelBK1, ModelBK2, ModelDP3>;

struct Event {
  double time = 0.0;
  Status cause = Status::Cause1;
};

/// Draws one complete (uncensored, untruncated) observation for `group` (1 or 2).
Event sample_event(const Model& model, int group, Rng& rng);

/// Closed-form CIF of `cause` and overall survival P(T > t) for a group.
double model_cif(const Model& model, int group, int cause, double t);
double model_survival(const Model& model, int group, double t);

struct NoCensoring {};
struct UniformCensoring {
  double a = 0.0;
  double b = 1.0;
};
struct ExponentialCensoring {
  double rate = 0.0;  // 0 means no censoring
};
using Censoring = std::variant<NoCensoring, UniformCensoring, ExponentialCensoring>;

struct NoTruncation {};
/// With probability `fraction` the entry time is Gamma(shape, scale), else 0.
struct GammaTruncation {
  double shape = 0.75;
  double scale = 1.5;
  double fraction = 0.75;
};
using Truncation = std::variant<NoTruncation, GammaTruncation>;

/// Censors and truncates one event. Returns nullopt when the entry time is at
/// or after the observed exit, i.e. the subject never enters the study.
std::optional<Subject> apply_incompleteness(const Event& event, const Censoring& censoring,
                                            const Truncation& truncation, Rng& rng);

/// Marginal P(C < T) for untruncated subjects of a group under a censoring law.
double censoring_probability(const Model& model, int group, const Censoring& censoring);

/// U(0, b) censoring whose marginal censoring probability in `group` equals
/// `target`, found by root finding on b.
UniformCensoring calibrate_uniform_censoring(const Model& model, int group, double target);

struct GeneratedSample {
  Sample sample;
  std::size_t draws = 0;  // events drawn, including truncated ones
};

/// Draws until `n` subjects survive truncation. With `redraw` false exactly
/// `n` events are drawn and the truncated ones are dropped.
GeneratedSample generate_sample(const Model& model, int group, std::size_t n, const Censoring& censoring,
                                const Truncation& truncation, Rng& rng, std::string label,
                                bool redraw = true);

struct Scenario {
  std::string id = "scenario";
  Model model = ModelDP3{};
  std::size_t n1 = 100;
  std::size_t n2 = 100;
  std::array<Censoring, 2> censoring{NoCensoring{}, NoCensoring{}};
  Truncation truncation = NoTruncation{};
  Interval interval{0.0, 1.5};
  std::size_t n_sim = 1000;
  BootstrapConfig bootstrap;
  std::vector<Method> tests = all_methods();
  std::size_t max_grid = 0;
  /// Sizes count subjects after truncation (redraw) or before it (drop).
  bool sizes_after_truncation = true;
  /// Hand the generated samples to the tests in reverse order.
  bool swap_groups = false;
  /// Worker threads over replications; 0 means hardware concurrency.
  unsigned threads = 1;
};

/// Throws ConfigError naming the first invalid field.
void validate(const Scenario& scenario);

struct ReplicationOutcome {
  std::vector<bool> reject;  // aligned with Scenario::tests
  bool no_events = false;
  std::size_t draws = 0;
};

/// One Monte Carlo replication; depends only on the scenario and `index`.
ReplicationOutcome run_replication(const Scenario& scenario, std::size_t index);

struct RejectionRow {
  std::string test;
  std::size_t rejections = 0;
  double proportion = 0.0;
  double se = 0.0;
  double wallclock_s = 0.0;
};

struct RejectionTable {
  std::string scenario_id;
  std::size_t n_sim = 0;
  std::vector<RejectionRow> rows;
  std::size_t no_event_runs = 0;
  double mean_redraw_factor = 1.0;  // drawn / accepted subjects
  double wallclock_s = 0.0;
};

RejectionTable monte_carlo(const Scenario& scenario);

/// CSV with header scenario_id,test,proportion,se,wallclock_s.
void write_csv(const RejectionTable& table, std::ostream& out, bool header = true);

}  // namespace cifcompare
