#include "cifcompare/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "cifcompare/errors.hpp"
#include "cifcompare/weight.hpp"

#ifndef CIFCOMPARE_VERSION
#define CIFCOMPARE_VERSION "0.0.0"
#endif

namespace cifcompare {

namespace {

using nlohmann::ordered_json;

std::string num(double v) { return ordered_json(v).dump(); }

GroupSummary summarize(const Sample& s) {
  GroupSummary g;
  g.label = s.label();
  g.size = s.size();
  for (const Subject& x : s.subjects()) {
    if (x.status == Status::Cause1) ++g.cause1;
    else if (x.status == Status::Cause2) ++g.cause2;
    else ++g.censored;
  }
  return g;
}

double last_event_time(const Sample& s) {
  double t = -1.0;
  for (const Subject& x : s.subjects()) {
    if (x.status != Status::Censored) t = std::max(t, x.exit);
  }
  if (t < 0.0) throw Error(ErrorKind::InvalidArgument, "group '" + s.label() + "' has no observed events");
  return t;
}

std::string file_safe(const std::string& label) {
  std::string out;
  for (char c : label) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return out.empty() ? "group" : out;
}

ordered_json results_json(const std::vector<TestResult>& results) {
  ordered_json arr = ordered_json::array();
  for (const TestResult& r : results) {
    ordered_json j;
    j["method"] = r.method;
    j["statistic"] = r.statistic;
    j["critical"] = r.critical;
    j["p_value"] = r.p_value;
    j["reject"] = r.reject;
    ordered_json extras = ordered_json::object();
    for (const auto& [k, v] : r.extras) extras[k] = v;
    j["extras"] = extras;
    j["notes"] = r.notes;
    arr.push_back(j);
  }
  return arr;
}

}  // namespace

std::string_view version() { return CIFCOMPARE_VERSION; }

std::string_view to_string(TiePolicy policy) { return policy == TiePolicy::Jitter ? "jitter" : "reject"; }

TiePolicy parse_tie_policy(std::string_view text) {
  if (text == "jitter") return TiePolicy::Jitter;
  if (text == "reject") return TiePolicy::Reject;
  throw ConfigError("tie-policy", "expected jitter or reject");
}

ReportBundle run_test(const Dataset& dataset, const RunOptions& options) {
  validate(options.bootstrap);
  if (options.weight != "const" && options.weight != "ad") throw ConfigError("weight", "expected const or ad");
  if (options.methods.empty()) throw ConfigError("methods", "no test method given");

  auto [s1, s2] = to_samples(dataset, options.tie_policy, options.bootstrap.seed);

  ReportBundle out;
  Interval interval;
  if (options.interval) {
    interval = *options.interval;
  } else {
    interval = Interval{0.0, std::min(last_event_time(s1), last_event_time(s2))};
  }
  if (!(interval.lower >= 0.0 && interval.lower < interval.upper && std::isfinite(interval.upper))) {
    throw Error(ErrorKind::InvalidInterval, "need 0 <= t1 < t2 < inf");
  }
  for (const Sample* s : {&s1, &s2}) {
    if (at_risk_at(*s, interval.upper) < 1) {
      const std::string msg = "group '" + s->label() + "' has nobody at risk at t2 = " + num(interval.upper);
      if (options.strict_risk_set) throw Error(ErrorKind::EmptyRiskSet, msg);
      out.warnings.push_back(msg);
    }
  }

  const Grid grid = event_grid(s1, s2, interval, false);
  AnalysisOptions ao;
  ao.methods = options.methods;
  ao.rho1 = Weight::constant();
  ao.rho2 = options.weight == "ad" ? Weight::anderson_darling(interval.lower, interval.upper) : Weight::constant();
  ao.bootstrap = options.bootstrap;
  ao.max_grid = options.max_grid;
  Analysis analysis = analyze(s1, s2, grid, ao);

  out.groups = {summarize(s1), summarize(s2)};
  out.results = std::move(analysis.results);
  out.grid.assign(grid.points().begin(), grid.points().end());
  out.cif[0] = EventTable(s1).cif(1).evaluate_sorted(out.grid);
  out.cif[1] = EventTable(s2).cif(1).evaluate_sorted(out.grid);

  Provenance& p = out.provenance;
  p.version = std::string(version());
  p.seed = options.bootstrap.seed;
  p.replicates = options.bootstrap.replicates;
  p.alpha = options.bootstrap.alpha;
  p.multiplier = std::string(to_string(options.bootstrap.law));
  p.interval = interval;
  p.default_interval = !options.interval.has_value();
  p.weight_ks = ao.rho1.name();
  p.weight_cvm = ao.rho2.name();
  p.tie_policy = std::string(to_string(options.tie_policy));
  for (Method m : options.methods) p.methods.emplace_back(to_string(m));
  p.max_grid = options.max_grid;
  return out;
}

std::string to_json(const ReportBundle& b) {
  const Provenance& p = b.provenance;
  ordered_json j;
  ordered_json prov;
  prov["version"] = p.version;
  prov["seed"] = p.seed;
  prov["B"] = p.replicates;
  prov["alpha"] = p.alpha;
  prov["multiplier"] = p.multiplier;
  prov["interval"] = {p.interval.lower, p.interval.upper};
  prov["interval_rule"] = p.default_interval ? "default" : "given";
  prov["weights"] = {{"ks", p.weight_ks}, {"cvm", p.weight_cvm}};
  prov["tie_policy"] = p.tie_policy;
  prov["methods"] = p.methods;
  prov["max_grid"] = p.max_grid;
  j["provenance"] = prov;

  ordered_json groups = ordered_json::array();
  for (const GroupSummary& g : b.groups) {
    groups.push_back({{"label", g.label}, {"n", g.size}, {"cause1", g.cause1}, {"cause2", g.cause2},
                      {"censored", g.censored}});
  }
  j["groups"] = groups;
  j["results"] = results_json(b.results);
  ordered_json curves;
  curves["time"] = b.grid;
  curves[b.groups[0].label] = b.cif[0];
  curves[b.groups[1].label] = b.cif[1];
  j["cif"] = curves;
  j["warnings"] = b.warnings;
  return j.dump(2) + "\n";
}

std::string to_table(const ReportBundle& b) {
  const Provenance& p = b.provenance;
  std::ostringstream out;
  out << "cifcompare " << p.version << "\n";
  out << "seed " << p.seed << ", B " << p.replicates << ", alpha " << num(p.alpha) << ", multiplier "
      << p.multiplier << ", tie policy " << p.tie_policy << "\n";
  out << "interval [" << num(p.interval.lower) << ", " << num(p.interval.upper) << "] ("
      << (p.default_interval ? "default" : "given") << "), weights ks=" << p.weight_ks << " cvm=" << p.weight_cvm
      << ", max grid " << p.max_grid << "\n\n";

  out << std::left << std::setw(16) << "group" << std::right << std::setw(8) << "n" << std::setw(8) << "cause1"
      << std::setw(8) << "cause2" << std::setw(10) << "censored" << "\n";
  for (const GroupSummary& g : b.groups) {
    out << std::left << std::setw(16) << g.label << std::right << std::setw(8) << g.size << std::setw(8) << g.cause1
        << std::setw(8) << g.cause2 << std::setw(10) << g.censored << "\n";
  }
  out << "\n"
      << std::left << std::setw(10) << "method" << std::setw(26) << "statistic" << std::setw(26) << "critical"
      << std::setw(26) << "p_value" << "reject\n";
  for (const TestResult& r : b.results) {
    out << std::left << std::setw(10) << r.method << std::setw(26) << num(r.statistic) << std::setw(26)
        << num(r.critical) << std::setw(26) << num(r.p_value) << (r.reject ? "true" : "false") << "\n";
    for (const auto& [k, v] : r.extras) out << "    " << k << " = " << num(v) << "\n";
    for (const auto& n : r.notes) out << "    note: " << n << "\n";
  }
  out << "\ncause-1 CIF on the grid\n"
      << std::left << std::setw(26) << "time" << std::setw(26) << b.groups[0].label << b.groups[1].label << "\n";
  for (std::size_t i = 0; i < b.grid.size(); ++i) {
    out << std::left << std::setw(26) << num(b.grid[i]) << std::setw(26) << num(b.cif[0][i]) << num(b.cif[1][i])
        << "\n";
  }
  for (const auto& w : b.warnings) out << "warning: " << w << "\n";
  return out.str();
}

std::vector<std::pair<double, double>> cif_vertices(const Sample& sample, double lower, double upper) {
  const StepFunction f = EventTable(sample).cif(1);
  std::vector<std::pair<double, double>> v;
  v.emplace_back(lower, f(lower));
  const auto& times = f.jump_times();
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] > lower && times[i] < upper) v.emplace_back(times[i], f.values()[i]);
  }
  v.emplace_back(upper, f(upper));
  return v;
}

std::vector<std::filesystem::path> emit_plot_data(const Dataset& dataset, std::optional<Interval> interval,
                                                  TiePolicy policy, std::uint64_t seed,
                                                  const std::filesystem::path& dir) {
  auto [s1, s2] = to_samples(dataset, policy, seed);
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> paths;
  for (const Sample* s : {&s1, &s2}) {
    double lower = 0.0;
    double upper = 0.0;
    if (interval) {
      lower = interval->lower;
      upper = interval->upper;
    } else {
      for (const Subject& x : s->subjects()) upper = std::max(upper, x.exit);
    }
    const auto path = dir / ("cif_" + file_safe(s->label()) + ".csv");
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::FileNotFound, "cannot write " + path.string());
    out << "time,cif\n" << std::setprecision(17);
    for (const auto& [t, f] : cif_vertices(*s, lower, upper)) out << t << ',' << f << '\n';
    paths.push_back(path);
  }
  return paths;
}

}  // namespace cifcompare
