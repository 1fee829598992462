#include "cifcompare/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "cifcompare/errors.hpp"

namespace cifcompare {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Uniform on the open interval (0, 1).
double open_uniform(Rng& rng) {
  double u = 0.0;
  while (u == 0.0) u = std::generate_canonical<double, 53>(rng);
  return u;
}

double standard_exponential(Rng& rng) { return -std::log(open_uniform(rng)); }

void check_group(int group) {
  if (group != 1 && group != 2) throw Error(ErrorKind::InvalidArgument, "group must be 1 or 2");
}

}  // namespace

Event sample_event(const Model& model, int group, Rng& rng) {
  check_group(group);
  return std::visit(
      overloaded{
          [&](const ModelBK1& m) {
            const double z = group == 2 ? 1.0 : 0.0;
            const double q = m.p * std::exp(m.beta * z);
            if (open_uniform(rng) < q / (1.0 - m.p + q)) {
              // Inverse of F1(t) / F1(inf) in x = 1 - e^-t.
              const double u = open_uniform(rng);
              const double x = u * (1.0 - m.p) / (1.0 - m.p + q * (1.0 - u));
              return Event{-std::log1p(-x), Status::Cause1};
            }
            return Event{standard_exponential(rng), Status::Cause2};
          },
          [&](const ModelBK2& m) {
            const double z = group == 1 ? 1.0 : 0.0;
            const double pk = group == 1 ? m.p1 : m.p2;
            if (open_uniform(rng) < 1.0 - pk) {
              const double x = std::pow(open_uniform(rng), std::exp(-m.beta * z));
              return Event{-std::log1p(-x), Status::Cause1};
            }
            return Event{standard_exponential(rng), Status::Cause2};
          },
          [&](const ModelDP3& m) {
            if (group == 1) {
              const double t = standard_exponential(rng);
              const bool first = open_uniform(rng) < std::exp(-t);
              return Event{t, first ? Status::Cause1 : Status::Cause2};
            }
            const double t = 0.5 * standard_exponential(rng);
            const bool first = open_uniform(rng) < 0.5 * m.c;
            return Event{t, first ? Status::Cause1 : Status::Cause2};
          },
      },
      model);
}

double model_cif(const Model& model, int group, int cause, double t) {
  check_group(group);
  if (cause != 1 && cause != 2) throw Error(ErrorKind::InvalidArgument, "cause must be 1 or 2");
  if (t <= 0.0) return 0.0;
  const double x = -std::expm1(-t);
  return std::visit(
      overloaded{
          [&](const ModelBK1& m) {
            const double e = std::exp(m.beta * (group == 2 ? 1.0 : 0.0));
            if (cause == 1) return m.p * x * e / (1.0 - m.p + m.p * x * e);
            return (1.0 - m.p) * x / (1.0 - m.p + m.p * e);
          },
          [&](const ModelBK2& m) {
            const double e = std::exp(m.beta * (group == 1 ? 1.0 : 0.0));
            const double pk = group == 1 ? m.p1 : m.p2;
            if (cause == 1) return (1.0 - pk) * std::pow(x, e);
            return pk * x;
          },
          [&](const ModelDP3& m) {
            if (group == 1) {
              const double f1 = 0.5 * -std::expm1(-2.0 * t);
              return cause == 1 ? f1 : x - f1;
            }
            const double all = -std::expm1(-2.0 * t);
            return cause == 1 ? 0.5 * m.c * all : 0.5 * (2.0 - m.c) * all;
          },
      },
      model);
}

double model_survival(const Model& model, int group, double t) {
  return 1.0 - model_cif(model, group, 1, t) - model_cif(model, group, 2, t);
}

std::optional<Subject> apply_incompleteness(const Event& event, const Censoring& censoring,
                                            const Truncation& truncation, Rng& rng) {
  const double c = std::visit(overloaded{
                                  [](const NoCensoring&) { return kInf; },
                                  [&](const UniformCensoring& u) { return u.a + (u.b - u.a) * open_uniform(rng); },
                                  [&](const ExponentialCensoring& e) {
                                    return e.rate > 0.0 ? standard_exponential(rng) / e.rate : kInf;
                                  },
                              },
                              censoring);
  const double entry = std::visit(overloaded{
                                      [](const NoTruncation&) { return 0.0; },
                                      [&](const GammaTruncation& g) {
                                        if (open_uniform(rng) >= g.fraction) return 0.0;
                                        std::gamma_distribution<double> dist(g.shape, g.scale);
                                        return dist(rng);
                                      },
                                  },
                                  truncation);
  const double exit = std::min(event.time, c);
  if (entry >= exit) return std::nullopt;
  return Subject{entry, exit, event.time <= c ? event.cause : Status::Censored};
}

double censoring_probability(const Model& model, int group, const Censoring& censoring) {
  using boost::math::quadrature::gauss_kronrod;
  auto survival = [&](double t) { return model_survival(model, group, t); };
  return std::visit(overloaded{
                        [](const NoCensoring&) { return 0.0; },
                        [&](const UniformCensoring& u) {
                          return gauss_kronrod<double, 61>::integrate(survival, u.a, u.b, 15, 1e-12) /
                                 (u.b - u.a);
                        },
                        [&](const ExponentialCensoring& e) {
                          if (e.rate <= 0.0) return 0.0;
                          auto integrand = [&](double t) { return e.rate * std::exp(-e.rate * t) * survival(t); };
                          return gauss_kronrod<double, 61>::integrate(integrand, 0.0, kInf, 15, 1e-12);
                        },
                    },
                    censoring);
}

UniformCensoring calibrate_uniform_censoring(const Model& model, int group, double target) {
  if (!(target > 0.0 && target < 1.0)) throw ConfigError("censoring", "target must lie in (0, 1)");
  auto excess = [&](double b) {
    return censoring_probability(model, group, UniformCensoring{0.0, b}) - target;
  };
  double lo = 1e-6;
  double hi = 1.0;
  while (excess(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw ConfigError("censoring", "cannot reach the requested censoring proportion");
  }
  const auto [a, b] = boost::math::tools::bisect(excess, lo, hi, boost::math::tools::eps_tolerance<double>(45));
  return UniformCensoring{0.0, 0.5 * (a + b)};
}

GeneratedSample generate_sample(const Model& model, int group, std::size_t n, const Censoring& censoring,
                                const Truncation& truncation, Rng& rng, std::string label, bool redraw) {
  std::vector<Subject> subjects;
  subjects.reserve(n);
  std::size_t draws = 0;
  const std::size_t max_draws = 10000 * std::max<std::size_t>(n, 1);
  while (redraw ? subjects.size() < n : draws < n) {
    if (++draws > max_draws) throw Error(ErrorKind::InvalidArgument, "truncation rejects almost every subject");
    const Event e = sample_event(model, group, rng);
    if (auto s = apply_incompleteness(e, censoring, truncation, rng)) subjects.push_back(*s);
  }
  const std::uint64_t jitter_seed = rng();
  return {validate_sample(std::move(subjects), TiePolicy::Jitter, jitter_seed, std::move(label)), draws};
}

void validate(const Scenario& s) {
  std::visit(overloaded{
                 [](const ModelBK1& m) {
                   if (!(m.p > 0.0 && m.p < 1.0)) throw ConfigError("p", "must lie in (0, 1)");
                   if (!std::isfinite(m.beta)) throw ConfigError("beta", "must be finite");
                 },
                 [](const ModelBK2& m) {
                   if (!(m.p1 > 0.0 && m.p1 < 1.0)) throw ConfigError("p1", "must lie in (0, 1)");
                   if (!(m.p2 > 0.0 && m.p2 < 1.0)) throw ConfigError("p2", "must lie in (0, 1)");
                   if (!std::isfinite(m.beta)) throw ConfigError("beta", "must be finite");
                 },
                 [](const ModelDP3& m) {
                   if (!(m.c >= 0.0 && m.c <= 1.0)) throw ConfigError("c", "must lie in [0, 1]");
                 },
             },
             s.model);
  if (s.n1 == 0) throw ConfigError("n1", "must be positive");
  if (s.n2 == 0) throw ConfigError("n2", "must be positive");
  for (const auto& c : s.censoring) {
    std::visit(overloaded{
                   [](const NoCensoring&) {},
                   [](const UniformCensoring& u) {
                     if (!(u.a >= 0.0 && u.a < u.b && std::isfinite(u.b))) {
                       throw ConfigError("censoring", "uniform censoring needs 0 <= a < b");
                     }
                   },
                   [](const ExponentialCensoring& e) {
                     if (!(e.rate >= 0.0) || !std::isfinite(e.rate)) {
                       throw ConfigError("censoring", "exponential rate must be >= 0");
                     }
                   },
               },
               c);
  }
  if (const auto* g = std::get_if<GammaTruncation>(&s.truncation)) {
    if (!(g->shape > 0.0) || !(g->scale > 0.0)) throw ConfigError("truncation", "gamma shape and scale must be positive");
    if (!(g->fraction >= 0.0 && g->fraction <= 1.0)) throw ConfigError("truncation", "fraction must lie in [0, 1]");
  }
  if (!(s.interval.lower >= 0.0 && s.interval.lower < s.interval.upper && std::isfinite(s.interval.upper))) {
    throw ConfigError("interval", "need 0 <= t1 < t2 < inf");
  }
  if (s.n_sim == 0) throw ConfigError("n_sim", "must be positive");
  validate(s.bootstrap);
  if (s.tests.empty()) throw ConfigError("tests", "no test method given");
}

ReplicationOutcome run_replication(const Scenario& scenario, std::size_t index) {
  const std::uint64_t rep = derive_seed(scenario.bootstrap.seed, index);
  Rng rng1(derive_seed(rep, 1));
  Rng rng2(derive_seed(rep, 2));
  GeneratedSample g1 = generate_sample(scenario.model, 1, scenario.n1, scenario.censoring[0],
                                       scenario.truncation, rng1, "group1", scenario.sizes_after_truncation);
  GeneratedSample g2 = generate_sample(scenario.model, 2, scenario.n2, scenario.censoring[1],
                                       scenario.truncation, rng2, "group2", scenario.sizes_after_truncation);

  ReplicationOutcome out;
  out.reject.assign(scenario.tests.size(), false);
  out.draws = g1.draws + g2.draws;

  const Sample& a = scenario.swap_groups ? g2.sample : g1.sample;
  const Sample& b = scenario.swap_groups ? g1.sample : g2.sample;

  auto has_cause1 = [&](const Sample& s) {
    return std::any_of(s.subjects().begin(), s.subjects().end(), [&](const Subject& x) {
      return x.status == Status::Cause1 && x.exit <= scenario.interval.upper;
    });
  };
  if (!has_cause1(a) || !has_cause1(b)) {
    out.no_events = true;
    return out;
  }

  AnalysisOptions options;
  options.methods = scenario.tests;
  options.bootstrap = scenario.bootstrap;
  options.bootstrap.seed = derive_seed(rep, 3);
  options.bootstrap.threads = 1;
  options.max_grid = scenario.max_grid;

  const Grid grid = event_grid(a, b, scenario.interval, false);
  const Analysis analysis = analyze(a, b, grid, options);
  for (std::size_t i = 0; i < analysis.results.size(); ++i) out.reject[i] = analysis.results[i].reject;
  return out;
}

RejectionTable monte_carlo(const Scenario& scenario) {
  validate(scenario);
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n_sim = scenario.n_sim;
  std::vector<ReplicationOutcome> outcomes(n_sim);

  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) outcomes[i] = run_replication(scenario, i);
  };
  unsigned threads = scenario.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : scenario.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_sim));
  if (threads <= 1) {
    run_range(0, n_sim);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n_sim + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(n_sim, begin + chunk);
      if (begin < end) pool.emplace_back(run_range, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  RejectionTable table;
  table.scenario_id = scenario.id;
  table.n_sim = n_sim;
  table.wallclock_s = elapsed;
  std::size_t draws = 0;
  for (const auto& o : outcomes) {
    draws += o.draws;
    if (o.no_events) ++table.no_event_runs;
  }
  table.mean_redraw_factor =
      static_cast<double>(draws) / static_cast<double>(n_sim * (scenario.n1 + scenario.n2));
  for (std::size_t t = 0; t < scenario.tests.size(); ++t) {
    RejectionRow row;
    row.test = std::string(to_string(scenario.tests[t]));
    for (const auto& o : outcomes) row.rejections += o.reject[t] ? 1 : 0;
    row.proportion = static_cast<double>(row.rejections) / static_cast<double>(n_sim);
    row.se = std::sqrt(row.proportion * (1.0 - row.proportion) / static_cast<double>(n_sim));
    row.wallclock_s = elapsed;
    table.rows.push_back(row);
  }
  return table;
}

void write_csv(const RejectionTable& table, std::ostream& out, bool header) {
  if (header) out << "scenario_id,test,proportion,se,wallclock_s\n";
  const auto flags = out.flags();
  const auto precision = out.precision();
  for (const auto& r : table.rows) {
    out << table.scenario_id << ',' << r.test << ',' << std::setprecision(6) << r.proportion << ','
        << r.se << ',' << std::fixed << std::setprecision(3) << r.wallclock_s << '\n';
    out.flags(flags);
  }
  out.precision(precision);
}

}  // namespace cifcompare
