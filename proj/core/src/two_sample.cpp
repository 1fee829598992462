#include "cifcompare/two_sample.hpp"

#include <algorithm>

#include "cifcompare/approximation.hpp"
#include "cifcompare/errors.hpp"

namespace cifcompare {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::KS: return "ks";
    case Method::CvM: return "cvm";
    case Method::Box: return "box";
    case Method::Pearson: return "pearson";
    case Method::Pepe: return "pepe";
  }
  return "unknown";
}

Method parse_method(std::string_view text) {
  for (Method m : all_methods()) {
    if (to_string(m) == text) return m;
  }
  throw ConfigError("methods", "unknown method '" + std::string(text) + "'");
}

std::vector<Method> parse_methods(std::string_view text) {
  std::vector<Method> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    std::string_view item = text.substr(start, comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) {
      const Method m = parse_method(item);
      if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
    }
    start = comma + 1;
  }
  if (out.empty()) throw ConfigError("methods", "no test method given");
  return out;
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> methods{Method::KS, Method::CvM, Method::Box, Method::Pearson,
                                           Method::Pepe};
  return methods;
}

Analysis analyze(const Sample& sample1, const Sample& sample2, const Grid& grid,
                 const AnalysisOptions& options) {
  const EventTable table1(sample1);
  const EventTable table2(sample2);

  Analysis out;
  out.w = w_process(table1, table2, grid);
  out.results.resize(options.methods.size());

  std::vector<StatisticRequest> requests;
  std::vector<std::size_t> request_slot;
  bool want_moments = false;
  for (std::size_t i = 0; i < options.methods.size(); ++i) {
    switch (options.methods[i]) {
      case Method::KS:
        requests.push_back({StatisticKind::KS, options.rho1});
        request_slot.push_back(i);
        break;
      case Method::CvM:
        requests.push_back({StatisticKind::CvM, options.rho2});
        request_slot.push_back(i);
        break;
      case Method::Pepe:
        requests.push_back({StatisticKind::Pepe, options.rho2});
        request_slot.push_back(i);
        break;
      case Method::Box:
      case Method::Pearson:
        want_moments = true;
        break;
    }
  }

  if (!requests.empty()) {
    auto boot = bootstrap_tests(table1, table2, grid, requests, options.bootstrap,
                                group_stream_keys(sample1.label(), sample2.label()));
    for (std::size_t r = 0; r < boot.size(); ++r) out.results[request_slot[r]] = std::move(boot[r]);
  }

  if (want_moments) {
    if (!options.rho2.bounded()) {
      throw Error(ErrorKind::InadmissibleWeight,
                  "Box and Pearson approximations need a continuous bounded weight");
    }
    const CovGrid pooled = pooled_covariance(group_covariance(table1, grid), group_covariance(table2, grid),
                                             sample1.size(), sample2.size());
    const CovGrid used = options.max_grid > 0 ? coarsen(pooled, options.max_grid) : pooled;
    out.moments = covariance_moments(used, options.rho2);
    out.moments_computed = true;
    const double t_cvm = cvm_stat(out.w, options.rho2).value;
    for (std::size_t i = 0; i < options.methods.size(); ++i) {
      if (options.methods[i] == Method::Box) {
        out.results[i] = box_test(t_cvm, out.moments.mu, out.moments.sigma2, options.bootstrap.alpha);
      } else if (options.methods[i] == Method::Pearson) {
        out.results[i] = pearson_test(t_cvm, out.moments.mu, out.moments.sigma2, out.moments.gamma,
                                      options.bootstrap.alpha);
      } else {
        continue;
      }
      if (used.dim() != pooled.dim()) out.results[i].extras["grid_points"] = static_cast<double>(used.dim());
    }
  }
  return out;
}

}  // namespace cifcompare
