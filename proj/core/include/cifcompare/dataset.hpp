#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cifcompare/survival.hpp"

namespace cifcompare {

struct ColumnMapping {
  std::string entry = "entry";
  std::string time = "time";
  std::string status = "status";
  std::string group = "group";
  /// When true a missing entry column means entry = 0 for every row;
  /// otherwise it is an UnknownColumn error.
  bool entry_optional = true;
};

/// Keeps rows whose `column` equals `value`, e.g. sex = female.
struct RowFilter {
  std::string column;
  std::string value;
};

struct DatasetOptions {
  ColumnMapping mapping;
  std::optional<RowFilter> filter;
  /// Keep only these group labels, in this order. Empty keeps all groups in
  /// order of first appearance.
  std::vector<std::string> groups;
};

struct Record {
  double entry = 0.0;
  double time = 0.0;
  Status status = Status::Censored;
  std::string group;

  bool operator==(const Record&) const = default;
};

struct Dataset {
  std::vector<Record> records;
  std::vector<std::string> groups;  // exactly two labels
  ColumnMapping mapping;
  bool has_entry = false;

  std::size_t group_size(const std::string& label) const;
};

/// Reads a comma-separated file with a header row. Quoted fields may contain
/// commas and doubled quotes. Errors: FileNotFound, UnknownColumn,
/// ParseError(line) for malformed rows, MoreThanTwoGroups after filtering.
Dataset read_dataset(const std::filesystem::path& path, const DatasetOptions& options = {});
Dataset read_dataset(std::istream& in, const DatasetOptions& options = {});

/// Writes the records with the dataset's column names; times use 17
/// significant digits so that reading back yields identical records.
void write_dataset(const Dataset& dataset, std::ostream& out);
void write_dataset(const Dataset& dataset, const std::filesystem::path& path);

/// Splits one CSV line into fields.
std::vector<std::string> split_csv_line(const std::string& line);

/// Builds the two samples in group order. Ties are handled by `policy`; the
/// jitter seed of each group is derived from `seed` and the group label.
std::pair<Sample, Sample> to_samples(const Dataset& dataset, TiePolicy policy, std::uint64_t seed);

}  // namespace cifcompare
