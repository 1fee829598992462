#include "cifcompare/resampling.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "cifcompare/errors.hpp"

namespace cifcompare {

std::string_view to_string(MultiplierLaw law) {
  switch (law) {
    case MultiplierLaw::StandardNormal: return "normal";
    case MultiplierLaw::Rademacher: return "rademacher";
    case MultiplierLaw::CenteredPoisson1: return "poisson";
  }
  return "unknown";
}

MultiplierLaw parse_multiplier_law(std::string_view text) {
  if (text == "normal") return MultiplierLaw::StandardNormal;
  if (text == "rademacher") return MultiplierLaw::Rademacher;
  if (text == "poisson") return MultiplierLaw::CenteredPoisson1;
  throw ConfigError("multiplier", "unknown multiplier law '" + std::string(text) + "'");
}

void validate(const BootstrapConfig& config) {
  if (config.replicates == 0) throw ConfigError("B", "need at least one bootstrap replicate");
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) throw ConfigError("alpha", "must lie in (0, 1)");
}

std::vector<double> draw_multipliers(MultiplierLaw law, std::size_t count, Rng& rng) {
  std::vector<double> out(count);
  switch (law) {
    case MultiplierLaw::StandardNormal: {
      std::normal_distribution<double> dist(0.0, 1.0);
      for (auto& v : out) v = dist(rng);
      break;
    }
    case MultiplierLaw::Rademacher: {
      std::bernoulli_distribution coin(0.5);
      for (auto& v : out) v = coin(rng) ? 1.0 : -1.0;
      break;
    }
    case MultiplierLaw::CenteredPoisson1: {
      std::poisson_distribution<int> dist(1.0);
      for (auto& v : out) v = static_cast<double>(dist(rng)) - 1.0;
      break;
    }
  }
  return out;
}

BootstrapEngine::BootstrapEngine(const EventTable& table1, const EventTable& table2, const Grid& grid)
    : grid_(grid), scale_(scale_factor(table1.sample_size(), table2.sample_size())) {
  const auto points = grid_.points();
  const std::array<const EventTable*, 2> tables{&table1, &table2};
  for (std::size_t k = 0; k < 2; ++k) {
    auto& group = groups_[k];
    const auto rows = tables[k]->rows();
    group.multipliers = rows.size();
    group.terms.reserve(rows.size());
    for (const auto& r : rows) {
      const auto bin = static_cast<std::size_t>(
          std::lower_bound(points.begin(), points.end(), r.time) - points.begin());
      Term t{bin, 0.0, 0.0};
      if (r.at_risk > 0.0) {
        const double a = r.cause == Status::Cause1 ? 1.0 - r.cif2 : r.cif1;
        t.centre = a / r.at_risk;
        t.inverse_risk = 1.0 / r.at_risk;
      }
      group.terms.push_back(t);
    }
    group.cif1_on_grid = tables[k]->cif(1).evaluate_sorted(points);
  }
}

std::size_t BootstrapEngine::multiplier_count(int group) const {
  if (group != 1 && group != 2) throw Error(ErrorKind::InvalidArgument, "group must be 1 or 2");
  return groups_[static_cast<std::size_t>(group - 1)].multipliers;
}

void BootstrapEngine::accumulate(const Group& group, std::span<const double> g, double sign,
                                 std::vector<double>& out) const {
  const std::size_t m = grid_.size();
  std::vector<double> centre(m, 0.0);
  std::vector<double> inverse(m, 0.0);
  for (std::size_t i = 0; i < group.terms.size(); ++i) {
    const auto& t = group.terms[i];
    if (t.bin >= m) continue;  // after t2
    centre[t.bin] += g[i] * t.centre;
    inverse[t.bin] += g[i] * t.inverse_risk;
  }
  double a = 0.0;
  double b = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    a += centre[j];
    b += inverse[j];
    out[j] += sign * (a - group.cif1_on_grid[j] * b);
  }
}

void BootstrapEngine::replicate(std::span<const double> g1, std::span<const double> g2,
                                std::vector<double>& out) const {
  if (g1.size() != groups_[0].multipliers || g2.size() != groups_[1].multipliers) {
    throw Error(ErrorKind::MultiplierCountMismatch,
                "expected " + std::to_string(groups_[0].multipliers) + " and " +
                    std::to_string(groups_[1].multipliers) + " multipliers");
  }
  out.assign(grid_.size(), 0.0);
  accumulate(groups_[0], g1, 1.0, out);
  accumulate(groups_[1], g2, -1.0, out);
  for (auto& v : out) v *= scale_;
}

DiffProcess bootstrap_process(const Sample& sample1, const Sample& sample2, const Grid& grid,
                              const Multipliers& multipliers) {
  const EventTable t1(sample1);
  const EventTable t2(sample2);
  const BootstrapEngine engine(t1, t2, grid);
  DiffProcess d{grid, {}, sample1.size(), sample2.size()};
  engine.replicate(multipliers.group1, multipliers.group2, d.values);
  return d;
}

std::array<std::uint64_t, 2> group_stream_keys(std::string_view label1, std::string_view label2) {
  if (label1 == label2) return {1, 2};
  return {stable_hash(label1), stable_hash(label2)};
}

Multipliers replicate_multipliers(const BootstrapConfig& config, std::size_t b,
                                  const std::array<std::uint64_t, 2>& keys, std::size_t count1,
                                  std::size_t count2) {
  const std::uint64_t base = derive_seed(config.seed, b);
  Rng rng1(derive_seed(base, keys[0]));
  Rng rng2(derive_seed(base, keys[1]));
  return {draw_multipliers(config.law, count1, rng1), draw_multipliers(config.law, count2, rng2)};
}

std::size_t critical_rank(std::size_t replicates, double alpha) {
  // The small offset keeps e.g. 0.95 * 1000 from rounding up to 951.
  const double position = (1.0 - alpha) * static_cast<double>(replicates + 1);
  auto rank = static_cast<std::size_t>(std::ceil(position - 1e-9));
  return std::clamp<std::size_t>(rank, 1, replicates);
}

namespace {

double evaluate(StatisticKind kind, const std::vector<double>& values, const std::vector<double>& point_weights,
                const std::vector<double>& cells) {
  switch (kind) {
    case StatisticKind::KS: return ks_value(values, point_weights);
    case StatisticKind::CvM: return cvm_value(values, cells);
    case StatisticKind::Pepe: return pepe_value(values, cells);
    case StatisticKind::CvMStud: break;
  }
  throw Error(ErrorKind::InvalidArgument, "the studentized statistic has no bootstrap test");
}

bool has_cause1_event(const EventTable& table, double upper) {
  for (const auto& r : table.rows()) {
    if (r.time > upper) break;
    if (r.cause == Status::Cause1) return true;
  }
  return false;
}

}  // namespace

std::vector<TestResult> bootstrap_tests(const EventTable& table1, const EventTable& table2,
                                        const Grid& grid, std::span<const StatisticRequest> requests,
                                        const BootstrapConfig& config,
                                        const std::array<std::uint64_t, 2>& stream_keys) {
  validate(config);
  const std::size_t nreq = requests.size();
  const std::size_t m = grid.size();

  std::vector<std::vector<double>> point_weights(nreq);
  std::vector<std::vector<double>> cells(nreq);
  for (std::size_t r = 0; r < nreq; ++r) {
    if (requests[r].kind == StatisticKind::KS) {
      if (!requests[r].weight.bounded()) {
        throw Error(ErrorKind::InadmissibleWeight, "the supremum statistic needs a bounded weight");
      }
      point_weights[r].resize(m);
      for (std::size_t i = 0; i < m; ++i) point_weights[r][i] = requests[r].weight.value(grid[i]);
    } else {
      cells[r] = cell_weights(grid, requests[r].weight);
    }
  }

  const DiffProcess observed = w_process(table1, table2, grid);
  std::vector<TestResult> results(nreq);
  for (std::size_t r = 0; r < nreq; ++r) {
    results[r].method = std::string(to_string(requests[r].kind));
    results[r].statistic = evaluate(requests[r].kind, observed.values, point_weights[r], cells[r]);
    results[r].extras["B"] = static_cast<double>(config.replicates);
  }

  if (!has_cause1_event(table1, grid.upper()) && !has_cause1_event(table2, grid.upper())) {
    for (auto& res : results) {
      res.critical = 0.0;
      res.p_value = 1.0;
      res.reject = false;
      res.notes.push_back("no cause-1 events in the interval; test not rejected");
    }
    return results;
  }

  const BootstrapEngine engine(table1, table2, grid);
  const std::size_t B = config.replicates;
  const std::size_t c1 = engine.multiplier_count(1);
  const std::size_t c2 = engine.multiplier_count(2);
  std::vector<std::vector<double>> replicates(nreq, std::vector<double>(B));

  auto run_range = [&](std::size_t begin, std::size_t end) {
    std::vector<double> values;
    for (std::size_t b = begin; b < end; ++b) {
      const Multipliers g = replicate_multipliers(config, b, stream_keys, c1, c2);
      engine.replicate(g.group1, g.group2, values);
      for (std::size_t r = 0; r < nreq; ++r) {
        replicates[r][b] = evaluate(requests[r].kind, values, point_weights[r], cells[r]);
      }
    }
  };

  unsigned threads = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, B));
  if (threads <= 1) {
    run_range(0, B);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (B + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(B, begin + chunk);
      if (begin < end) pool.emplace_back(run_range, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  const std::size_t rank = critical_rank(B, config.alpha);
  for (std::size_t r = 0; r < nreq; ++r) {
    auto& res = results[r];
    auto sorted = replicates[r];
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(rank - 1), sorted.end());
    res.critical = sorted[rank - 1];
    const auto exceed = std::count_if(replicates[r].begin(), replicates[r].end(),
                                      [&](double t) { return t >= res.statistic; });
    res.p_value = (1.0 + static_cast<double>(exceed)) / (static_cast<double>(B) + 1.0);
    res.reject = res.statistic > res.critical;
  }
  return results;
}

TestResult bootstrap_test(const Sample& sample1, const Sample& sample2, Interval interval,
                          StatisticKind kind, const Weight& weight, const BootstrapConfig& config,
                          bool check_risk_set) {
  const Grid grid = event_grid(sample1, sample2, interval, check_risk_set);
  const EventTable t1(sample1);
  const EventTable t2(sample2);
  const StatisticRequest request{kind, weight};
  return bootstrap_tests(t1, t2, grid, std::span<const StatisticRequest>(&request, 1), config,
                         group_stream_keys(sample1.label(), sample2.label()))
      .front();
}

}  // namespace cifcompare
