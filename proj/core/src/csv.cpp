#include "cbal/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cbal/errors.hpp"

namespace cbal {

const std::vector<double>& CsvTable::column(const std::string& name) const {
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j] == name) return data[j];
  }
  throw Error("no such column: " + name);
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open input file: " + path);

  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw Error("empty CSV file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  t.columns = split_line(line);
  if (t.columns.empty()) throw Error("CSV header has no columns");
  t.data.resize(t.columns.size());

  std::size_t row = 1;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row;
    const auto cells = split_line(line);
    if (cells.size() != t.columns.size()) {
      throw Error("CSV row " + std::to_string(row) + " has " +
                  std::to_string(cells.size()) + " cells, expected " +
                  std::to_string(t.columns.size()));
    }
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (cells[j].empty()) {
        throw Error("missing value at row " + std::to_string(row) + ", column " +
                    t.columns[j]);
      }
      std::size_t pos = 0;
      double v;
      try {
        v = std::stod(cells[j], &pos);
      } catch (const std::exception&) {
        throw Error("non-numeric cell '" + cells[j] + "' at row " + std::to_string(row));
      }
      if (pos != cells[j].size()) {
        throw Error("non-numeric cell '" + cells[j] + "' at row " + std::to_string(row));
      }
      t.data[j].push_back(v);
    }
  }
  return t;
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open output file: " + path);
  for (std::size_t j = 0; j < table.columns.size(); ++j) {
    out << (j ? "," : "") << table.columns[j];
  }
  out << "\n";
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", table.data[j][i]);
      out << (j ? "," : "") << buf;
    }
    out << "\n";
  }
}

}  // namespace cbal
