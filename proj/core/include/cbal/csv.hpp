#pragma once

#include <string>
#include <vector>

namespace cbal {

// Strict CSV: first row is a header, '.' decimal separator, every cell
// numeric, no missing values. Anything else is an Error.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;  // column-major, data[j][i]

  const std::vector<double>& column(const std::string& name) const;
  std::size_t rows() const { return data.empty() ? 0 : data[0].size(); }
};

CsvTable read_csv(const std::string& path);
void write_csv(const std::string& path, const CsvTable& table);

}  // namespace cbal
