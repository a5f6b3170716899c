#include "fme/text_table.h"

#include <algorithm>
#include <cstdio>

#include "fme/error.h"

namespace fme {

std::string RenderTextTable(const TextTable& table) {
  const std::size_t n_cols = table.header.size();
  if (table.row_names.size() != table.cells.size()) {
    throw ValidationError("text table needs one row name per row");
  }
  std::size_t name_width = 0;
  for (const auto& name : table.row_names) name_width = std::max(name_width, name.size());
  std::vector<std::size_t> widths(n_cols);
  for (std::size_t c = 0; c < n_cols; ++c) widths[c] = table.header[c].size();
  for (const auto& row : table.cells) {
    if (row.size() != n_cols) throw ValidationError("ragged text table row");
    for (std::size_t c = 0; c < n_cols; ++c) widths[c] = std::max(widths[c], row[c].size());
  }
  auto line = [&](const std::string& name, const std::vector<std::string>& cells) {
    std::string out = name + std::string(name_width - name.size(), ' ');
    for (std::size_t c = 0; c < n_cols; ++c) {
      out += ' ';
      out += std::string(widths[c] - cells[c].size(), ' ');
      out += cells[c];
    }
    out += '\n';
    return out;
  };
  std::string out = line("", table.header);
  for (std::size_t r = 0; r < table.cells.size(); ++r) {
    out += line(table.row_names[r], table.cells[r]);
  }
  return out;
}

std::string FormatFixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  std::string s = buf;
  // "-0.0000" -> "0.0000"
  if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string FormatRounded(double value, int digits) {
  std::string s = FormatFixed(value, digits);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

std::string FormatShort(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", value);
  return buf;
}

}  // namespace fme
