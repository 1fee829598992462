#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cifcompare/dataset.hpp"
#include "cifcompare/errors.hpp"
#include "cifcompare/report.hpp"
#include "cifcompare/scenario_file.hpp"
#include "cifcompare/simulation.hpp"

namespace fs = std::filesystem;
using namespace cifcompare;

namespace {

struct DataFlags {
  std::string path;
  std::string entry_col = "entry";
  std::string time_col = "time";
  std::string status_col = "status";
  std::string group_col = "group";
  bool entry_given = false;
  std::string filter;
  std::string groups;
  std::vector<double> interval;
  std::string tie_policy = "jitter";
  std::uint64_t seed = 0;
};

void add_data_flags(CLI::App* app, DataFlags& f) {
  app->add_option("data", f.path, "CSV file with a header row")->required();
  app->add_option("--entry-col", f.entry_col, "Entry (left-truncation) time column; missing means 0");
  app->add_option("--time-col", f.time_col, "Exit time column");
  app->add_option("--status-col", f.status_col, "Status column: 0 censored, 1 or 2 cause");
  app->add_option("--group-col", f.group_col, "Group label column");
  app->add_option("--filter", f.filter, "Keep rows with COLUMN=VALUE");
  app->add_option("--groups", f.groups, "Two group labels A,B to compare, in this order");
  app->add_option("--interval", f.interval, "Analysis interval T1 T2")->expected(2);
  app->add_option("--tie-policy", f.tie_policy, "jitter or reject")->check(CLI::IsMember({"jitter", "reject"}));
  app->add_option("--seed", f.seed, "Seed for tie jitter and bootstrap multipliers");
}

Dataset load(const DataFlags& f, CLI::App* app) {
  DatasetOptions o;
  o.mapping.entry = f.entry_col;
  o.mapping.time = f.time_col;
  o.mapping.status = f.status_col;
  o.mapping.group = f.group_col;
  o.mapping.entry_optional = app->count("--entry-col") == 0;
  if (!f.filter.empty()) {
    const auto eq = f.filter.find('=');
    if (eq == std::string::npos) throw ConfigError("filter", "expected COLUMN=VALUE");
    o.filter = RowFilter{f.filter.substr(0, eq), f.filter.substr(eq + 1)};
  }
  if (!f.groups.empty()) {
    o.groups = split_csv_line(f.groups);
    if (o.groups.size() != 2 || o.groups[0] == o.groups[1]) throw ConfigError("groups", "expected two labels A,B");
  }
  return read_dataset(fs::path(f.path), o);
}

std::optional<Interval> interval_of(const DataFlags& f) {
  if (f.interval.empty()) return std::nullopt;
  return Interval{f.interval[0], f.interval[1]};
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::FileNotFound, "cannot write " + path.string());
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-sample tests for cumulative incidence functions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));

  DataFlags test_data;
  std::string methods = "ks,cvm,box,pearson,pepe";
  std::size_t replicates = 999;
  double alpha = 0.05;
  std::string multiplier = "normal";
  std::string weight = "const";
  bool json = false;
  std::string out_dir;
  std::size_t max_grid = 0;
  unsigned threads = 1;
  bool strict = false;

  CLI::App* test = app.add_subcommand("test", "Compare the cause-1 CIFs of two groups");
  add_data_flags(test, test_data);
  test->add_option("--methods", methods, "Comma list of ks,cvm,box,pearson,pepe");
  test->add_option("--B", replicates, "Bootstrap replicates");
  test->add_option("--alpha", alpha, "Nominal level");
  test->add_option("--multiplier", multiplier, "normal, rademacher or poisson");
  test->add_option("--weight", weight, "Weight of the CvM-type statistics: const or ad");
  test->add_flag("--json", json, "Print JSON instead of the table");
  test->add_option("--out-dir", out_dir, "Also write report.json, results.csv and CIF curve files here");
  test->add_option("--max-grid", max_grid, "Coarsen the covariance grid to at most this many points");
  test->add_option("--threads", threads, "Bootstrap worker threads (results do not depend on it)");
  test->add_flag("--strict-risk-set", strict, "Fail instead of warning when nobody is at risk at T2");

  std::string scenario_path;
  std::string csv_out;
  std::optional<std::size_t> n_sim;
  std::optional<unsigned> sim_threads;
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo rejection rates for a scenario file");
  simulate->add_option("scenario", scenario_path, "Scenario file")->required();
  simulate->add_option("--out", csv_out, "CSV output file (default: standard output)");
  simulate->add_option("--n-sim", n_sim, "Override the number of replications");
  simulate->add_option("--threads", sim_threads, "Override the worker thread count");

  DataFlags plot_data;
  std::string plot_dir = ".";
  CLI::App* plot = app.add_subcommand("plot", "Write per-group cause-1 CIF step vertices as CSV");
  add_data_flags(plot, plot_data);
  plot->add_option("--out-dir", plot_dir, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (test->parsed()) {
      const Dataset data = load(test_data, test);
      RunOptions o;
      o.interval = interval_of(test_data);
      o.methods = parse_methods(methods);
      o.weight = weight;
      o.bootstrap.replicates = replicates;
      o.bootstrap.alpha = alpha;
      o.bootstrap.seed = test_data.seed;
      o.bootstrap.law = parse_multiplier_law(multiplier);
      o.bootstrap.threads = threads;
      o.tie_policy = parse_tie_policy(test_data.tie_policy);
      o.max_grid = max_grid;
      o.strict_risk_set = strict;
      const ReportBundle bundle = run_test(data, o);
      const std::string json_text = to_json(bundle);
      std::cout << (json ? json_text : to_table(bundle));
      for (const auto& w : bundle.warnings) std::cerr << "warning: " << w << "\n";
      if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_file(fs::path(out_dir) / "report.json", json_text);
        std::ostringstream csv;
        csv << "method,statistic,critical,p_value,reject\n" << std::setprecision(17);
        for (const auto& r : bundle.results) {
          csv << r.method << ',' << r.statistic << ',' << r.critical << ',' << r.p_value << ','
              << (r.reject ? 1 : 0) << '\n';
        }
        write_file(fs::path(out_dir) / "results.csv", csv.str());
        emit_plot_data(data, bundle.provenance.interval, o.tie_policy, o.bootstrap.seed, out_dir);
      }
    } else if (simulate->parsed()) {
      Scenario s = load_scenario(scenario_path);
      if (n_sim) s.n_sim = *n_sim;
      if (sim_threads) s.threads = *sim_threads;
      std::cerr << describe(s);
      const RejectionTable table = monte_carlo(s);
      if (csv_out.empty()) {
        write_csv(table, std::cout);
      } else {
        std::ofstream out(csv_out);
        if (!out) throw Error(ErrorKind::FileNotFound, "cannot write " + csv_out);
        write_csv(table, out);
      }
      std::cerr << "no-event runs " << table.no_event_runs << ", mean redraw factor " << table.mean_redraw_factor
                << ", wallclock " << table.wallclock_s << " s\n";
    } else if (plot->parsed()) {
      const Dataset data = load(plot_data, plot);
      for (const auto& p :
           emit_plot_data(data, interval_of(plot_data), parse_tie_policy(plot_data.tie_policy), plot_data.seed,
                          plot_dir)) {
        std::cout << p.string() << "\n";
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
