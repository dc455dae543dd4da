#include "catspec/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "catspec/errors.hpp"

namespace catspec::csv {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string format_double_exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string write(const Table& table) {
  std::string out;
  for (const auto& [key, value] : table.metadata) {
    out += "# " + key + ": " + value + "\n";
  }
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += table.exact ? format_double_exact(row[i]) : format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell += c;
    }
  }
  cells.push_back(cell);
  return cells;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& cell, double& out) {
  const std::string t = trim(cell);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end && *end == '\0';
}

}  // namespace

Table read(const std::string& text, const std::string& origin) {
  Table table;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      auto colon = t.find(':');
      if (colon != std::string::npos) {
        table.metadata[trim(t.substr(1, colon - 1))] = trim(t.substr(colon + 1));
      }
      continue;
    }
    auto cells = split_cells(t);
    std::vector<double> row(cells.size());
    bool numeric = true;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (!parse_double(cells[i], row[i])) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (header_seen) {
        throw ConfigError(origin + ":" + std::to_string(line_no) +
                          ": non-numeric cell in data row '" + t + "'");
      }
      for (auto& c : cells) table.columns.push_back(trim(c));
      header_seen = true;
      continue;
    }
    if (!table.rows.empty() && row.size() != table.rows.front().size()) {
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": inconsistent column count");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return read(buf.str(), path);
}

void write_file(const std::string& path, const Table& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << write(table);
}

}  // namespace catspec::csv
