#ifndef FME_TEXT_TABLE_H_
#define FME_TEXT_TABLE_H_

#include <string>
#include <vector>

namespace fme {

// Data-frame style text table: row names left-aligned, then each column
// right-aligned to the width of its widest cell or header, separated by one
// space. Every line ends with '\n'.
struct TextTable {
  std::vector<std::string> header;
  std::vector<std::string> row_names;
  std::vector<std::vector<std::string>> cells;  // [row][column]
};

std::string RenderTextTable(const TextTable& table);

// `value` rounded to `digits` decimals with trailing zeros removed
// (307.32750 -> "307.3275", 195.9300 -> "195.93", 1.0 -> "1").
std::string FormatRounded(double value, int digits);
// Fixed number of decimals.
std::string FormatFixed(double value, int digits);
// printf "%g".
std::string FormatShort(double value);

}  // namespace fme

#endif  // FME_TEXT_TABLE_H_
