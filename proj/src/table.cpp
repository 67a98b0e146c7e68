#include "dpsynth/table.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace dpsynth {

std::optional<std::size_t> Schema::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == name) return i;
  }
  return std::nullopt;
}

void Schema::validate() const {
  std::set<std::string> seen;
  for (const auto& c : columns) {
    if (!seen.insert(c.name).second) {
      throw DataError("duplicate column name: " + c.name);
    }
    if (c.kind == ColumnKind::Categorical && c.categories.empty()) {
      throw DataError("categorical column with empty label set: " + c.name);
    }
    if (c.kind == ColumnKind::Numeric && !(c.min <= c.max)) {
      throw DataError("numeric column with min > max: " + c.name);
    }
  }
}

std::size_t Table::rows() const {
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (schema.columns[i].kind == ColumnKind::Numeric) return numeric[i].size();
    return categorical[i].size();
  }
  return 0;
}

Table Table::select_rows(const std::vector<std::size_t>& idx) const {
  Table out;
  out.schema = schema;
  out.numeric.resize(cols());
  out.categorical.resize(cols());
  for (std::size_t c = 0; c < cols(); ++c) {
    if (schema.columns[c].kind == ColumnKind::Numeric) {
      out.numeric[c].reserve(idx.size());
      for (auto i : idx) out.numeric[c].push_back(numeric[c][i]);
    } else {
      out.categorical[c].reserve(idx.size());
      for (auto i : idx) out.categorical[c].push_back(categorical[c][i]);
    }
  }
  return out;
}

void Table::validate() const {
  schema.validate();
  if (numeric.size() != cols() || categorical.size() != cols()) {
    throw DataError("table storage does not match schema width");
  }
  std::size_t n = rows();
  for (std::size_t c = 0; c < cols(); ++c) {
    std::size_t len = schema.columns[c].kind == ColumnKind::Numeric
                          ? numeric[c].size()
                          : categorical[c].size();
    if (len != n) throw DataError("column length mismatch");
  }
}

bool is_missing_cell(const std::string& cell) {
  if (cell.empty()) return true;
  std::string low;
  low.reserve(cell.size());
  for (char ch : cell) low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  return low == "na" || low == "nan";
}

bool parse_number(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  const char* begin = cell.c_str();
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(begin, &end);
  if (end != begin + cell.size() || errno == ERANGE) return false;
  if (!std::isfinite(v)) return false;
  out = v;
  return true;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(field);
      field.clear();
    } else {
      field.push_back(ch);
    }
  }
  out.push_back(field);
  return out;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

RawTable parse_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  RawTable raw;
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty file: " + path);
  for (auto& f : split_csv_line(line)) raw.names.push_back(trim(f));
  if (raw.names.empty()) throw DataError("no columns in header: " + path);
  while (std::getline(in, line)) {
    if (line.empty() && in.peek() == EOF) break;
    auto fields = split_csv_line(line);
    if (fields.size() != raw.names.size()) {
      throw DataError("ragged row with " + std::to_string(fields.size()) +
                      " fields, expected " + std::to_string(raw.names.size()));
    }
    for (auto& f : fields) f = trim(f);
    raw.rows.push_back(std::move(fields));
  }
  return raw;
}

RawTable drop_missing(const RawTable& raw) {
  RawTable out;
  out.names = raw.names;
  for (const auto& row : raw.rows) {
    bool gap = std::any_of(row.begin(), row.end(),
                           [](const std::string& c) { return is_missing_cell(c); });
    if (!gap) out.rows.push_back(row);
  }
  if (!raw.rows.empty() && out.rows.empty()) {
    throw DataError("empty after cleaning: every row has a missing cell");
  }
  return out;
}

Schema infer_schema(const RawTable& raw) {
  if (raw.names.empty()) throw DataError("zero columns");
  if (raw.rows.empty()) throw DataError("no rows");
  Schema schema;
  for (std::size_t c = 0; c < raw.names.size(); ++c) {
    ColumnDesc desc;
    desc.name = raw.names[c];
    bool all_numeric = true;
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const auto& row : raw.rows) {
      if (is_missing_cell(row[c])) continue;
      double v;
      if (!parse_number(row[c], v)) {
        all_numeric = false;
        break;
      }
      lo = first ? v : std::min(lo, v);
      hi = first ? v : std::max(hi, v);
      first = false;
    }
    if (all_numeric && !first) {
      desc.kind = ColumnKind::Numeric;
      desc.min = lo;
      desc.max = hi;
    } else {
      desc.kind = ColumnKind::Categorical;
      std::set<std::string> labels;
      for (const auto& row : raw.rows) {
        if (!is_missing_cell(row[c])) labels.insert(row[c]);
      }
      desc.categories.assign(labels.begin(), labels.end());
    }
    schema.columns.push_back(std::move(desc));
  }
  schema.validate();
  return schema;
}

Table typed_table(const RawTable& raw, const Schema& schema, bool check_categories) {
  if (raw.names.size() != schema.size()) {
    throw DataError("header width does not match schema");
  }
  for (std::size_t c = 0; c < schema.size(); ++c) {
    if (raw.names[c] != schema.columns[c].name) {
      throw DataError("header name mismatch: " + raw.names[c] + " vs " +
                      schema.columns[c].name);
    }
  }
  Table t;
  t.schema = schema;
  t.numeric.resize(schema.size());
  t.categorical.resize(schema.size());
  for (const auto& row : raw.rows) {
    for (std::size_t c = 0; c < schema.size(); ++c) {
      if (schema.columns[c].kind == ColumnKind::Numeric) {
        double v;
        if (!parse_number(row[c], v)) {
          throw DataError("numeric parse failure in column " +
                          schema.columns[c].name + ": '" + row[c] + "'");
        }
        t.numeric[c].push_back(v);
      } else {
        if (check_categories) {
          const auto& cats = schema.columns[c].categories;
          if (std::find(cats.begin(), cats.end(), row[c]) == cats.end()) {
            throw DataError("unknown category in column " +
                            schema.columns[c].name + ": '" + row[c] + "'");
          }
        }
        t.categorical[c].push_back(row[c]);
      }
    }
  }
  return t;
}

Table load_csv(const std::string& path, const std::optional<Schema>& schema) {
  RawTable raw = drop_missing(parse_csv(path));
  if (raw.rows.empty()) throw DataError("no rows in " + path);
  if (schema) {
    schema->validate();
    return typed_table(raw, *schema, /*check_categories=*/true);
  }
  return typed_table(raw, infer_schema(raw), /*check_categories=*/false);
}

Splits split(const Table& t, const SplitSpec& spec) {
  std::size_t n = t.rows();
  if (n < 3) throw DataError("split requires at least 3 rows");
  double total = spec.train + spec.control + spec.test;
  if (std::fabs(total - 1.0) > 1e-12) {
    throw ConfigError("split fractions must sum to 1");
  }
  // Floor for control and test, remainder to train.
  std::size_t n_control = static_cast<std::size_t>(std::floor(spec.control * n));
  std::size_t n_test = static_cast<std::size_t>(std::floor(spec.test * n));
  std::size_t n_train = n - n_control - n_test;
  if (n_train == 0 || n_control == 0 || n_test == 0) {
    throw DataError("split produced an empty part");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng = Rng(spec.seed).substream("table.split");
  std::shuffle(perm.begin(), perm.end(), rng.engine());
  std::vector<std::size_t> itrain(perm.begin(), perm.begin() + n_train);
  std::vector<std::size_t> icontrol(perm.begin() + n_train,
                                    perm.begin() + n_train + n_control);
  std::vector<std::size_t> itest(perm.begin() + n_train + n_control, perm.end());
  return Splits{t.select_rows(itrain), t.select_rows(icontrol),
                t.select_rows(itest)};
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += "\"\"";
    else out.push_back(ch);
  }
  out += "\"";
  return out;
}

}  // namespace

void write_csv(const Table& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  for (std::size_t c = 0; c < t.cols(); ++c) {
    if (c) out << ',';
    out << csv_escape(t.schema.columns[c].name);
  }
  out << '\n';
  std::size_t n = t.rows();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < t.cols(); ++c) {
      if (c) out << ',';
      if (t.schema.columns[c].kind == ColumnKind::Numeric) {
        out << format_double(t.numeric[c][r]);
      } else {
        out << csv_escape(t.categorical[c][r]);
      }
    }
    out << '\n';
  }
}

}  // namespace dpsynth
