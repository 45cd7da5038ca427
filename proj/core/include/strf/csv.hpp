#pragma once

#include <string>
#include <vector>

namespace strf {

// Shortest round-trip decimal form; identical across runs and thread counts.
std::string fmt(double v);
std::string fmt(long long v);

// Long-format table: one header row, then rows of already-formatted cells.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add(std::vector<std::string> row);
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::string str() const;
  // Writes str() to path; throws ValidationError if the file cannot be opened.
  void write(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace strf
