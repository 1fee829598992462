#include "cifcompare/dataset.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "cifcompare/errors.hpp"
#include "cifcompare/rng.hpp"

namespace cifcompare {

namespace {

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_time(const std::string& text, std::size_t line, const std::string& column) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
    throw ParseError(line, "column '" + column + "': not a finite number: '" + text + "'");
  }
  if (v < 0.0) throw ParseError(line, "column '" + column + "': negative time");
  return v;
}

Status parse_status(const std::string& text, std::size_t line) {
  if (text == "0") return Status::Censored;
  if (text == "1") return Status::Cause1;
  if (text == "2") return Status::Cause2;
  throw ParseError(line, "status must be 0, 1 or 2, got '" + text + "'");
}

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::size_t Dataset::group_size(const std::string& label) const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [&](const Record& r) { return r.group == label; }));
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? field : strip(field));
      field.clear();
      was_quoted = false;
    } else {
      field += c;
    }
  }
  fields.push_back(was_quoted ? field : strip(field));
  return fields;
}

Dataset read_dataset(std::istream& in, const DatasetOptions& options) {
  const ColumnMapping& map = options.mapping;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!strip(line).empty()) {
      header = split_csv_line(line);
      break;
    }
  }
  if (header.empty()) throw ParseError(line_no == 0 ? 1 : line_no, "missing header row");

  auto column = [&](const std::string& name) -> std::optional<std::size_t> {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };
  auto required = [&](const std::string& name) {
    const auto c = column(name);
    if (!c) throw Error(ErrorKind::UnknownColumn, "column '" + name + "' not found in header");
    return *c;
  };

  const std::size_t time_col = required(map.time);
  const std::size_t status_col = required(map.status);
  const std::size_t group_col = required(map.group);
  std::optional<std::size_t> entry_col = column(map.entry);
  if (!entry_col && !map.entry_optional) required(map.entry);
  std::optional<std::size_t> filter_col;
  if (options.filter) filter_col = required(options.filter->column);

  Dataset data;
  data.mapping = map;
  data.has_entry = entry_col.has_value();
  std::vector<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw ParseError(line_no, "expected " + std::to_string(header.size()) + " fields, got " +
                                    std::to_string(fields.size()));
    }
    if (filter_col && fields[*filter_col] != options.filter->value) continue;
    const std::string& group = fields[group_col];
    if (!options.groups.empty() &&
        std::find(options.groups.begin(), options.groups.end(), group) == options.groups.end()) {
      continue;
    }
    Record r;
    r.time = parse_time(fields[time_col], line_no, map.time);
    r.entry = entry_col ? parse_time(fields[*entry_col], line_no, map.entry) : 0.0;
    r.status = parse_status(fields[status_col], line_no);
    r.group = group;
    if (group.empty()) throw ParseError(line_no, "empty group label");
    if (!(r.time > r.entry)) throw ParseError(line_no, "time must exceed entry");
    if (std::find(seen.begin(), seen.end(), group) == seen.end()) seen.push_back(group);
    data.records.push_back(std::move(r));
  }

  if (seen.size() > 2) {
    std::string list;
    for (const auto& g : seen) list += (list.empty() ? "" : ", ") + g;
    throw Error(ErrorKind::MoreThanTwoGroups, "found groups " + list + "; filter down to two");
  }
  data.groups = options.groups.empty() ? seen : options.groups;
  if (data.groups.size() != 2) {
    throw Error(ErrorKind::InvalidArgument, "need exactly two groups, found " + std::to_string(seen.size()));
  }
  for (const auto& g : data.groups) {
    if (data.group_size(g) == 0) throw Error(ErrorKind::EmptySample, "group '" + g + "' has no rows");
  }
  return data;
}

Dataset read_dataset(const std::filesystem::path& path, const DatasetOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::FileNotFound, "cannot open " + path.string());
  return read_dataset(in, options);
}

void write_dataset(const Dataset& dataset, std::ostream& out) {
  const ColumnMapping& map = dataset.mapping;
  if (dataset.has_entry) out << quote(map.entry) << ',';
  out << quote(map.time) << ',' << quote(map.status) << ',' << quote(map.group) << '\n';
  const auto precision = out.precision(17);
  for (const Record& r : dataset.records) {
    if (dataset.has_entry) out << r.entry << ',';
    out << r.time << ',' << static_cast<int>(r.status) << ',' << quote(r.group) << '\n';
  }
  out.precision(precision);
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::FileNotFound, "cannot write " + path.string());
  write_dataset(dataset, out);
}

std::pair<Sample, Sample> to_samples(const Dataset& dataset, TiePolicy policy, std::uint64_t seed) {
  if (dataset.groups.size() != 2) throw Error(ErrorKind::InvalidArgument, "need exactly two groups");
  auto build = [&](const std::string& label) {
    std::vector<Subject> subjects;
    for (const Record& r : dataset.records) {
      if (r.group == label) subjects.push_back({r.entry, r.time, r.status});
    }
    return validate_sample(std::move(subjects), policy, derive_seed(seed, stable_hash(label)), label);
  };
  return {build(dataset.groups[0]), build(dataset.groups[1])};
}

}  // namespace cifcompare
