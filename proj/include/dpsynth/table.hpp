#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpsynth/rng.hpp"

namespace dpsynth {

// Configuration problem (bad flags, mismatched schema request).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Problem with the data itself (unreadable file, ragged rows, parse failure).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ColumnKind { Categorical, Numeric };

struct ColumnDesc {
  std::string name;
  ColumnKind kind = ColumnKind::Numeric;
  std::vector<std::string> categories;  // Categorical only
  double min = 0.0;                     // Numeric only
  double max = 0.0;
};

struct Schema {
  std::vector<ColumnDesc> columns;

  std::size_t size() const { return columns.size(); }
  std::optional<std::size_t> index_of(const std::string& name) const;
  void validate() const;
};

// Column-oriented mixed table. Exactly one of `numeric[i]` / `categorical[i]`
// is populated, matching schema.columns[i].kind.
struct Table {
  Schema schema;
  std::vector<std::vector<double>> numeric;
  std::vector<std::vector<std::string>> categorical;

  std::size_t rows() const;
  std::size_t cols() const { return schema.size(); }
  Table select_rows(const std::vector<std::size_t>& idx) const;
  void validate() const;
};

struct SplitSpec {
  double train = 0.6;
  double control = 0.2;
  double test = 0.2;
  std::uint64_t seed = 0;
};

struct Splits {
  Table train;
  Table control;
  Table test;
};

// Untyped CSV contents: header plus string rows, before schema inference.
struct RawTable {
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> rows;
};

bool is_missing_cell(const std::string& cell);
bool parse_number(const std::string& cell, double& out);

RawTable parse_csv(const std::string& path);
RawTable drop_missing(const RawTable& raw);
Schema infer_schema(const RawTable& raw);
Table typed_table(const RawTable& raw, const Schema& schema, bool check_categories);
Table load_csv(const std::string& path, const std::optional<Schema>& schema = {});
Splits split(const Table& t, const SplitSpec& spec);
void write_csv(const Table& t, const std::string& path);

std::string format_double(double v);  // shortest round-trip representation

}  // namespace dpsynth
