#pragma once

#include <concepts>
#include <filesystem>
#include <string>
#include <type_traits>
#include <vector>

namespace dimrate {

// Minimal CSV table: one header line, LF endings, '.' decimal separator,
// numbers in shortest round-trip form so identical inputs give identical bytes.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t rows() const { return rows_.size(); }

  // Cells are preformatted; use cell() for numbers.
  void add_row(std::vector<std::string> cells);

  static std::string cell(double v);
  template <std::integral T>
  static std::string cell(T v) {
    if constexpr (std::is_same_v<T, bool>) {
      return v ? "true" : "false";
    } else {
      return std::to_string(v);
    }
  }

  std::string str() const;
  void write(const std::filesystem::path& file) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace dimrate
