#include "cifcompare/scenario_file.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <vector>

#include "cifcompare/errors.hpp"

namespace cifcompare {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

double to_double(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0' || errno == ERANGE) throw ConfigError(key, "not a number: '" + text + "'");
  return v;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  if (text.empty() || text.front() == '-') throw ConfigError(key, "not a non-negative integer: '" + text + "'");
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (*end != '\0' || errno == ERANGE) throw ConfigError(key, "not a non-negative integer: '" + text + "'");
  return v;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{
      "id", "model", "p", "beta", "p1", "p2", "c", "n1", "n2", "censoring", "truncation", "sizes",
      "t1", "t2", "n_sim", "B", "alpha", "seed", "multiplier", "tests", "max_grid", "threads", "swap"};
  return keys;
}

// Shortest of 15 or 17 significant digits that reads back exactly.
std::string format_double(double v) {
  std::ostringstream out;
  out << std::setprecision(15) << v;
  if (std::strtod(out.str().c_str(), nullptr) == v) return out.str();
  out.str("");
  out << std::setprecision(17) << v;
  return out.str();
}

}  // namespace

Scenario parse_scenario(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(number), "expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end()) {
      throw ConfigError(key, "unknown key");
    }
    if (kv.count(key)) throw ConfigError(key, "given twice");
    kv[key] = value;
  }

  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  auto number_or = [&](const std::string& key, double fallback) {
    const std::string* v = get(key);
    return v ? to_double(key, *v) : fallback;
  };
  auto reject_keys = [&](std::initializer_list<const char*> keys, const std::string& model) {
    for (const char* k : keys) {
      if (get(k)) throw ConfigError(k, "not a parameter of model " + model);
    }
  };

  Scenario s;
  if (const auto* v = get("id")) s.id = *v;
  const std::string model = get("model") ? *get("model") : "dp3";
  if (model == "bk1") {
    reject_keys({"p1", "p2", "c"}, model);
    s.model = ModelBK1{number_or("p", 0.5), number_or("beta", 0.0)};
  } else if (model == "bk2") {
    reject_keys({"p", "c"}, model);
    ModelBK2 m;
    s.model = ModelBK2{number_or("p1", m.p1), number_or("p2", m.p2), number_or("beta", m.beta)};
  } else if (model == "dp3") {
    reject_keys({"p", "p1", "p2", "beta"}, model);
    s.model = ModelDP3{number_or("c", 1.0)};
  } else {
    throw ConfigError("model", "expected bk1, bk2 or dp3");
  }

  if (const auto* v = get("n1")) s.n1 = to_unsigned("n1", *v);
  if (const auto* v = get("n2")) s.n2 = to_unsigned("n2", *v);
  s.interval.lower = number_or("t1", s.interval.lower);
  s.interval.upper = number_or("t2", s.interval.upper);
  if (const auto* v = get("n_sim")) s.n_sim = to_unsigned("n_sim", *v);
  if (const auto* v = get("B")) s.bootstrap.replicates = to_unsigned("B", *v);
  s.bootstrap.alpha = number_or("alpha", s.bootstrap.alpha);
  if (const auto* v = get("seed")) s.bootstrap.seed = to_unsigned("seed", *v);
  if (const auto* v = get("multiplier")) {
    try {
      s.bootstrap.law = parse_multiplier_law(*v);
    } catch (const ConfigError& e) {
      throw ConfigError("multiplier", "expected normal, rademacher or poisson");
    }
  }
  if (const auto* v = get("tests")) {
    try {
      s.tests = parse_methods(*v);
    } catch (const ConfigError& e) {
      throw ConfigError("tests", e.what());
    }
  }
  if (const auto* v = get("max_grid")) s.max_grid = to_unsigned("max_grid", *v);
  if (const auto* v = get("threads")) s.threads = static_cast<unsigned>(to_unsigned("threads", *v));
  if (const auto* v = get("swap")) {
    if (*v == "true" || *v == "1") s.swap_groups = true;
    else if (*v == "false" || *v == "0") s.swap_groups = false;
    else throw ConfigError("swap", "expected true or false");
  }
  if (const auto* v = get("sizes")) {
    if (*v == "after") s.sizes_after_truncation = true;
    else if (*v == "before") s.sizes_after_truncation = false;
    else throw ConfigError("sizes", "expected after or before");
  }

  if (const auto* v = get("truncation")) {
    const auto w = words(*v);
    if (w.size() == 1 && w[0] == "none") {
      s.truncation = NoTruncation{};
    } else if (!w.empty() && w[0] == "gamma" && (w.size() == 1 || w.size() == 4)) {
      GammaTruncation g;
      if (w.size() == 4) {
        g.shape = to_double("truncation", w[1]);
        g.scale = to_double("truncation", w[2]);
        g.fraction = to_double("truncation", w[3]);
      }
      s.truncation = g;
    } else {
      throw ConfigError("truncation", "expected none or gamma SHAPE SCALE FRACTION");
    }
  }

  if (const auto* v = get("censoring")) {
    const auto w = words(*v);
    const std::string kind = w.empty() ? "" : w[0];
    if (kind == "none" && w.size() == 1) {
      s.censoring = {NoCensoring{}, NoCensoring{}};
    } else if (kind == "uniform" && (w.size() == 3 || w.size() == 5)) {
      const UniformCensoring u1{to_double("censoring", w[1]), to_double("censoring", w[2])};
      const UniformCensoring u2 =
          w.size() == 5 ? UniformCensoring{to_double("censoring", w[3]), to_double("censoring", w[4])} : u1;
      s.censoring = {u1, u2};
    } else if (kind == "exponential" && (w.size() == 2 || w.size() == 3)) {
      const double r1 = to_double("censoring", w[1]);
      const double r2 = w.size() == 3 ? to_double("censoring", w[2]) : r1;
      s.censoring = {ExponentialCensoring{r1}, ExponentialCensoring{r2}};
    } else if (kind == "target" && w.size() == 2) {
      const double target = to_double("censoring", w[1]);
      if (target == 0.0) {
        s.censoring = {NoCensoring{}, NoCensoring{}};
      } else {
        validate(s);  // model parameters must be sane before calibrating
        s.censoring = {calibrate_uniform_censoring(s.model, 1, target),
                       calibrate_uniform_censoring(s.model, 2, target)};
      }
    } else {
      throw ConfigError("censoring", "expected none, uniform A B [A2 B2], exponential R1 [R2] or target X");
    }
  }

  validate(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::FileNotFound, "cannot open scenario file " + path.string());
  return parse_scenario(in);
}

std::string describe(const Scenario& s) {
  std::ostringstream out;
  out << "id = " << s.id << '\n';
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, ModelBK1>) {
          out << "model = bk1\np = " << format_double(m.p) << "\nbeta = " << format_double(m.beta) << '\n';
        } else if constexpr (std::is_same_v<M, ModelBK2>) {
          out << "model = bk2\np1 = " << format_double(m.p1) << "\np2 = " << format_double(m.p2)
              << "\nbeta = " << format_double(m.beta) << '\n';
        } else {
          out << "model = dp3\nc = " << format_double(m.c) << '\n';
        }
      },
      s.model);
  out << "n1 = " << s.n1 << "\nn2 = " << s.n2 << '\n';

  out << "censoring = ";
  if (std::holds_alternative<NoCensoring>(s.censoring[0]) && std::holds_alternative<NoCensoring>(s.censoring[1])) {
    out << "none";
  } else if (std::holds_alternative<UniformCensoring>(s.censoring[0]) &&
             std::holds_alternative<UniformCensoring>(s.censoring[1])) {
    const auto& a = std::get<UniformCensoring>(s.censoring[0]);
    const auto& b = std::get<UniformCensoring>(s.censoring[1]);
    out << "uniform " << format_double(a.a) << ' ' << format_double(a.b) << ' ' << format_double(b.a) << ' '
        << format_double(b.b);
  } else {
    auto rate = [](const Censoring& c) {
      if (const auto* e = std::get_if<ExponentialCensoring>(&c)) return e->rate;
      if (std::holds_alternative<NoCensoring>(c)) return 0.0;
      throw ConfigError("censoring", "mixed censoring laws cannot be rendered");
    };
    out << "exponential " << format_double(rate(s.censoring[0])) << ' ' << format_double(rate(s.censoring[1]));
  }
  out << '\n';

  out << "truncation = ";
  if (const auto* g = std::get_if<GammaTruncation>(&s.truncation)) {
    out << "gamma " << format_double(g->shape) << ' ' << format_double(g->scale) << ' '
        << format_double(g->fraction);
  } else {
    out << "none";
  }
  out << "\nsizes = " << (s.sizes_after_truncation ? "after" : "before") << '\n';
  out << "t1 = " << format_double(s.interval.lower) << "\nt2 = " << format_double(s.interval.upper) << '\n';
  out << "n_sim = " << s.n_sim << "\nB = " << s.bootstrap.replicates << "\nalpha = "
      << format_double(s.bootstrap.alpha) << "\nseed = " << s.bootstrap.seed << "\nmultiplier = "
      << to_string(s.bootstrap.law) << '\n';
  out << "tests = ";
  for (std::size_t i = 0; i < s.tests.size(); ++i) out << (i ? "," : "") << to_string(s.tests[i]);
  out << "\nmax_grid = " << s.max_grid << "\nthreads = " << s.threads << "\nswap = "
      << (s.swap_groups ? "true" : "false") << '\n';
  return out.str();
}

}  // namespace cifcompare
