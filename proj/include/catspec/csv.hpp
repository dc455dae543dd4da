#pragma once

#include <map>
#include <string>
#include <vector>

// Small CSV layer shared by the scan writers and the curve/table readers.
// Output formatting is fixed ("%.12g", '\n' line endings) so identical
// inputs always serialize to identical bytes.
namespace catspec::csv {

std::string format_double(double v);
// Shortest representation that round-trips the exact double.
std::string format_double_exact(double v);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  // "# key: value" lines found before the header.
  std::map<std::string, std::string> metadata;
  // Serialize rows with full round-trip precision (curve files).
  bool exact = false;
};

// Serializes metadata (sorted by key), header, then rows.
std::string write(const Table& table);

// Parses the format produced by write(); also accepts plain CSV without
// metadata. Non-numeric cells raise ConfigError with the line number.
Table read(const std::string& text, const std::string& origin = "<string>");

Table read_file(const std::string& path);
void write_file(const std::string& path, const Table& table);

}  // namespace catspec::csv
