#include "fme/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "fme/error.h"
#include "fme/hash.h"
#include "json.hpp"

namespace fme {

std::string_view ColumnKindName(ColumnKind kind) {
  return kind == ColumnKind::kNumeric ? "numeric" : "categorical";
}

Column Column::Numeric(std::string name, std::vector<double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ValidationError("column '" + name + "' has a non-finite value at row " +
                            std::to_string(i));
    }
  }
  Column c;
  c.name_ = std::move(name);
  c.kind_ = ColumnKind::kNumeric;
  c.values_ = std::move(values);
  return c;
}

Column Column::Categorical(std::string name,
                           const std::vector<std::string>& labels,
                           std::optional<std::vector<std::string>> levels) {
  Column c;
  c.name_ = std::move(name);
  c.kind_ = ColumnKind::kCategorical;
  std::unordered_map<std::string, int32_t> lookup;
  if (levels) {
    c.levels_ = *levels;
    for (std::size_t i = 0; i < c.levels_.size(); ++i) {
      if (!lookup.emplace(c.levels_[i], static_cast<int32_t>(i)).second) {
        throw ValidationError("column '" + c.name_ + "' declares level '" +
                              c.levels_[i] + "' twice");
      }
    }
  }
  c.codes_.reserve(labels.size());
  for (const auto& label : labels) {
    auto it = lookup.find(label);
    if (it == lookup.end()) {
      if (levels) {
        throw ValidationError("column '" + c.name_ + "' has undeclared level '" +
                              label + "'");
      }
      it = lookup.emplace(label, static_cast<int32_t>(c.levels_.size())).first;
      c.levels_.push_back(label);
    }
    c.codes_.push_back(it->second);
  }
  return c;
}

Column Column::FromCodes(std::string name, std::vector<std::string> levels,
                         std::vector<int32_t> codes) {
  Column c;
  c.name_ = std::move(name);
  c.kind_ = ColumnKind::kCategorical;
  c.levels_ = std::move(levels);
  for (int32_t code : codes) {
    if (code < 0 || static_cast<std::size_t>(code) >= c.levels_.size()) {
      throw ValidationError("column '" + c.name_ + "' has an invalid level code");
    }
  }
  c.codes_ = std::move(codes);
  return c;
}

int32_t Column::LevelCode(std::string_view label) const {
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (levels_[i] == label) return static_cast<int32_t>(i);
  }
  return -1;
}

std::vector<std::string> Column::ObservedLevels() const {
  std::vector<bool> seen(levels_.size(), false);
  for (int32_t code : codes_) seen[code] = true;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (seen[i]) out.push_back(levels_[i]);
  }
  return out;
}

Column Column::Select(std::span<const std::size_t> rows) const {
  Column c;
  c.name_ = name_;
  c.kind_ = kind_;
  c.levels_ = levels_;
  if (is_numeric()) {
    c.values_.reserve(rows.size());
    for (std::size_t r : rows) c.values_.push_back(values_[r]);
  } else {
    c.codes_.reserve(rows.size());
    for (std::size_t r : rows) c.codes_.push_back(codes_[r]);
  }
  return c;
}

Dataset::Dataset(std::string name, std::vector<Column> columns,
                 std::optional<std::string> target)
    : name_(std::move(name)), columns_(std::move(columns)) {
  if (columns_.empty()) throw ValidationError("dataset has no columns");
  n_rows_ = columns_.front().size();
  if (n_rows_ == 0) throw ValidationError("dataset is empty");
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    const Column& c = columns_[i];
    if (c.size() != n_rows_) {
      throw ValidationError("column '" + c.name() + "' has " +
                            std::to_string(c.size()) + " rows, expected " +
                            std::to_string(n_rows_));
    }
    if (!index_.emplace(c.name(), i).second) {
      throw ValidationError("duplicate column name '" + c.name() + "'");
    }
  }
  SetTarget(std::move(target));
}

bool Dataset::HasColumn(std::string_view name) const {
  return index_.find(name) != index_.end();
}

std::size_t Dataset::ColumnIndex(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) {
    throw ValidationError("unknown feature '" + std::string(name) + "'");
  }
  return it->second;
}

std::vector<std::string> Dataset::FeatureNames() const {
  std::vector<std::string> out;
  for (const auto& c : columns_) {
    if (!target_ || c.name() != *target_) out.push_back(c.name());
  }
  return out;
}

Dataset Dataset::Select(std::span<const std::size_t> rows) const {
  std::vector<Column> cols;
  cols.reserve(columns_.size());
  for (const auto& c : columns_) cols.push_back(c.Select(rows));
  return Dataset(name_, std::move(cols), target_);
}

Dataset Dataset::Repeat(std::span<const std::size_t> rows,
                        std::size_t times) const {
  std::vector<std::size_t> expanded;
  expanded.reserve(rows.size() * times);
  for (std::size_t r : rows) expanded.insert(expanded.end(), times, r);
  return Select(expanded);
}

void Dataset::SetTarget(std::optional<std::string> target) {
  if (target && !HasColumn(*target)) {
    throw ValidationError("target column '" + *target + "' not present");
  }
  target_ = std::move(target);
}

void Dataset::SetNumeric(std::string_view name, std::vector<double> values) {
  Column& c = mutable_column(name);
  if (!c.is_numeric()) {
    throw ValidationError("feature '" + std::string(name) + "' is not numeric");
  }
  if (values.size() != n_rows_) throw ValidationError("column length mismatch");
  c = Column::Numeric(c.name(), std::move(values));
}

void Dataset::SetCodes(std::string_view name, std::vector<int32_t> codes) {
  Column& c = mutable_column(name);
  if (c.is_numeric()) {
    throw ValidationError("feature '" + std::string(name) +
                          "' is not categorical");
  }
  if (codes.size() != n_rows_) throw ValidationError("column length mismatch");
  c = Column::FromCodes(c.name(), c.levels(), std::move(codes));
}

// ---------------------------------------------------------------------------
// Schema sidecar

Schema ParseSchemaJson(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed schema JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("schema must be a JSON object");
  auto parse_kind = [](const std::string& col, const std::string& s) {
    if (s == "numeric") return ColumnKind::kNumeric;
    if (s == "categorical") return ColumnKind::kCategorical;
    throw ValidationError("column '" + col + "': unknown kind '" + s + "'");
  };
  Schema schema;
  for (const auto& [col, spec] : doc.items()) {
    ColumnSchema cs;
    if (spec.is_string()) {
      cs.kind = parse_kind(col, spec.get<std::string>());
    } else if (spec.is_object() && spec.contains("kind")) {
      cs.kind = parse_kind(col, spec.at("kind").get<std::string>());
      if (spec.contains("levels")) {
        if (cs.kind != ColumnKind::kCategorical) {
          throw ValidationError("column '" + col +
                                "': levels given for a numeric column");
        }
        cs.levels = spec.at("levels").get<std::vector<std::string>>();
      }
    } else {
      throw ValidationError("column '" + col + "': invalid schema entry");
    }
    schema.emplace(col, std::move(cs));
  }
  return schema;
}

namespace {

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool IsMissing(std::string_view cell) { return cell.empty() || cell == "NA"; }

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<double> ParseNumber(std::string_view cell) {
  cell = Trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0;
  const auto [ptr, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() ||
      !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

Schema LoadSchema(const std::filesystem::path& path) {
  return ParseSchemaJson(ReadFile(path));
}

// ---------------------------------------------------------------------------
// CSV

std::vector<std::vector<std::string>> ParseCsvRecords(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t i = 0;
  if (text.substr(0, 3) == "\xEF\xBB\xBF") i = 3;  // UTF-8 BOM
  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    // Blank lines are skipped.
    if (!(record.size() == 1 && record[0].empty() && !field_started)) {
      records.push_back(std::move(record));
    }
    record.clear();
    field_started = false;
  };
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        record.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        end_record();
        break;
      case '\n':
        end_record();
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) throw ValidationError("unterminated quoted CSV field");
  if (field_started || !field.empty() || !record.empty()) end_record();
  return records;
}

std::string CsvEscape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string FormatDouble17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

Dataset ReadCsv(std::string_view text, const CsvOptions& options) {
  auto records = ParseCsvRecords(text);
  if (records.empty()) throw ValidationError("CSV has no header row");
  const std::vector<std::string> header = records.front();
  const std::size_t n_cols = header.size();
  {
    std::set<std::string> seen;
    for (const auto& h : header) {
      if (!seen.insert(h).second) {
        throw ValidationError("duplicate column name '" + h + "'");
      }
    }
  }
  if (options.schema) {
    for (const auto& [col, _] : *options.schema) {
      if (std::find(header.begin(), header.end(), col) == header.end()) {
        throw ValidationError("schema names unknown column '" + col + "'");
      }
    }
  }
  if (options.target &&
      std::find(header.begin(), header.end(), *options.target) == header.end()) {
    throw ValidationError("target column '" + *options.target + "' not present");
  }

  std::vector<std::vector<std::string>> rows;
  rows.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    auto& rec = records[r];
    if (rec.size() != n_cols) {
      throw ValidationError("CSV line " + std::to_string(r + 1) + " has " +
                            std::to_string(rec.size()) + " fields, expected " +
                            std::to_string(n_cols));
    }
    bool missing = false;
    for (const auto& cell : rec) missing = missing || IsMissing(cell);
    if (missing) {
      if (options.drop_missing) continue;
      throw ValidationError("missing value on CSV line " + std::to_string(r + 1) +
                            " (use --drop-missing to drop such rows)");
    }
    rows.push_back(std::move(rec));
  }
  if (rows.empty()) throw ValidationError("empty table: CSV has no data rows");

  std::vector<Column> columns;
  columns.reserve(n_cols);
  for (std::size_t c = 0; c < n_cols; ++c) {
    const std::string& name = header[c];
    const ColumnSchema* declared = nullptr;
    if (options.schema) {
      auto it = options.schema->find(name);
      if (it != options.schema->end()) declared = &it->second;
    }
    std::vector<double> numbers;
    bool numeric = true;
    if (!declared || declared->kind == ColumnKind::kNumeric) {
      numbers.reserve(rows.size());
      for (std::size_t r = 0; r < rows.size(); ++r) {
        auto v = ParseNumber(rows[r][c]);
        if (!v) {
          if (declared) {
            throw ValidationError("non-numeric cell '" + rows[r][c] +
                                  "' in numeric column '" + name + "'");
          }
          numeric = false;
          break;
        }
        numbers.push_back(*v);
      }
    } else {
      numeric = false;
    }
    if (numeric) {
      columns.push_back(Column::Numeric(name, std::move(numbers)));
    } else {
      std::vector<std::string> labels;
      labels.reserve(rows.size());
      for (const auto& row : rows) labels.push_back(row[c]);
      columns.push_back(Column::Categorical(
          name, labels, declared ? declared->levels : std::nullopt));
    }
  }
  return Dataset(options.name.value_or("data"), std::move(columns),
                 options.target);
}

Dataset LoadCsv(const std::filesystem::path& path, const CsvOptions& options) {
  if (!std::filesystem::exists(path)) {
    throw IoError("missing file '" + path.string() + "'");
  }
  CsvOptions opts = options;
  if (!opts.name) opts.name = path.stem().string();
  return ReadCsv(ReadFile(path), opts);
}

std::string WriteCsv(const Dataset& data) {
  std::string out;
  const auto& cols = data.columns();
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (c) out.push_back(',');
    out += CsvEscape(cols[c].name());
  }
  out.push_back('\n');
  for (std::size_t r = 0; r < data.n_rows(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c) out.push_back(',');
      if (cols[c].is_numeric()) {
        out += FormatDouble17(cols[c].values()[r]);
      } else {
        out += CsvEscape(cols[c].label(r));
      }
    }
    out.push_back('\n');
  }
  return out;
}

std::string DatasetId(const Dataset& data) {
  return data.name() + "-" + Fnv1aHex(WriteCsv(data));
}

}  // namespace fme
