#ifndef FME_DATASET_H_
#define FME_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fme {

enum class ColumnKind { kNumeric, kCategorical };

std::string_view ColumnKindName(ColumnKind kind);

// One named column. Numeric columns hold finite doubles; categorical columns
// hold an ordered level table and one level code per row.
class Column {
 public:
  static Column Numeric(std::string name, std::vector<double> values);
  // Levels are taken in first-appearance order unless `levels` is given, in
  // which case every label must be one of them.
  static Column Categorical(std::string name,
                            const std::vector<std::string>& labels,
                            std::optional<std::vector<std::string>> levels = {});
  static Column FromCodes(std::string name, std::vector<std::string> levels,
                          std::vector<int32_t> codes);

  const std::string& name() const { return name_; }
  ColumnKind kind() const { return kind_; }
  bool is_numeric() const { return kind_ == ColumnKind::kNumeric; }
  std::size_t size() const {
    return is_numeric() ? values_.size() : codes_.size();
  }

  std::span<const double> values() const { return values_; }
  std::span<const int32_t> codes() const { return codes_; }
  const std::vector<std::string>& levels() const { return levels_; }
  const std::string& label(std::size_t row) const {
    return levels_[codes_[row]];
  }
  // Level code of `label`, or -1.
  int32_t LevelCode(std::string_view label) const;

  // Levels that occur at least once, in level order.
  std::vector<std::string> ObservedLevels() const;

  // Copy of the column restricted to `rows` (levels table kept).
  Column Select(std::span<const std::size_t> rows) const;

  std::vector<double>& mutable_values() { return values_; }
  std::vector<int32_t>& mutable_codes() { return codes_; }

 private:
  std::string name_;
  ColumnKind kind_ = ColumnKind::kNumeric;
  std::vector<double> values_;
  std::vector<std::string> levels_;
  std::vector<int32_t> codes_;
};

// Typed in-memory table. All columns share one length >= 1, names are unique,
// numeric cells are finite.
class Dataset {
 public:
  Dataset(std::string name, std::vector<Column> columns,
          std::optional<std::string> target = {});

  const std::string& name() const { return name_; }
  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_columns() const { return columns_.size(); }
  const std::vector<Column>& columns() const { return columns_; }
  const std::optional<std::string>& target() const { return target_; }

  bool HasColumn(std::string_view name) const;
  // Throws ValidationError for unknown names.
  std::size_t ColumnIndex(std::string_view name) const;
  const Column& column(std::string_view name) const {
    return columns_[ColumnIndex(name)];
  }
  // Column names excluding the target, in column order.
  std::vector<std::string> FeatureNames() const;

  Dataset Select(std::span<const std::size_t> rows) const;
  // Each row repeated `times` times consecutively.
  Dataset Repeat(std::span<const std::size_t> rows, std::size_t times) const;

  void SetTarget(std::optional<std::string> target);

  // In-place edits used to build shifted copies. Values must stay finite and
  // codes must index the column's level table.
  void SetNumeric(std::string_view name, std::vector<double> values);
  void SetCodes(std::string_view name, std::vector<int32_t> codes);
  Column& mutable_column(std::string_view name) {
    return columns_[ColumnIndex(name)];
  }

 private:
  std::string name_;
  std::vector<Column> columns_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::size_t n_rows_ = 0;
  std::optional<std::string> target_;
};

// Declared kind (and optionally level order) for one column.
struct ColumnSchema {
  ColumnKind kind = ColumnKind::kNumeric;
  std::optional<std::vector<std::string>> levels;
};
using Schema = std::map<std::string, ColumnSchema, std::less<>>;

// Parses a schema sidecar: {"col": "numeric"|"categorical"} or
// {"col": {"kind": "categorical", "levels": [...]}}.
Schema ParseSchemaJson(std::string_view text);
Schema LoadSchema(const std::filesystem::path& path);

struct CsvOptions {
  std::optional<Schema> schema;
  std::optional<std::string> target;
  // Rows with a missing cell are dropped instead of rejected.
  bool drop_missing = false;
  // Dataset name; defaults to the file stem.
  std::optional<std::string> name;
};

// RFC-4180 CSV with a header row. Undeclared columns are numeric when every
// non-missing cell parses as a finite number, categorical otherwise. Empty
// cells and "NA" count as missing.
Dataset ReadCsv(std::string_view text, const CsvOptions& options);
Dataset LoadCsv(const std::filesystem::path& path, const CsvOptions& options);

// Numbers are written with 17 significant digits so a reload is bit-exact.
std::string WriteCsv(const Dataset& data);

// Splits CSV text into records of fields (quotes removed).
std::vector<std::vector<std::string>> ParseCsvRecords(std::string_view text);
std::string CsvEscape(std::string_view field);

// Shortest "%.17g" rendering of a double.
std::string FormatDouble17(double value);

// Dataset name plus a hash of its CSV rendering.
std::string DatasetId(const Dataset& data);

}  // namespace fme

#endif  // FME_DATASET_H_
