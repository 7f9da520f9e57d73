#include "dimrate/csv.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dimrate/detail/kv.hpp"

namespace dimrate {

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw std::invalid_argument("CsvTable: no columns");
}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size()) {
    throw std::invalid_argument("CsvTable: row has " + std::to_string(cells.size()) + " cells, expected " +
                                std::to_string(columns_.size()));
  }
  rows_.push_back(std::move(cells));
}

std::string CsvTable::cell(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return detail::format_double(v);
}

namespace {

// Quote cells holding separators, quotes or line breaks; inner quotes are doubled.
void write_cell(std::ostream& os, const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) {
    os << cell;
    return;
  }
  os << '"';
  for (char c : cell) {
    if (c == '"') os << '"';
    os << c;
  }
  os << '"';
}

}  // namespace

std::string CsvTable::str() const {
  std::ostringstream os;
  auto emit = [&os](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i != 0) os << ',';
      write_cell(os, cells[i]);
    }
    os << '\n';
  };
  emit(columns_);
  for (const auto& r : rows_) emit(r);
  return os.str();
}

void CsvTable::write(const std::filesystem::path& file) const {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + file.string() + "' for writing");
  out << str();
  if (!out) throw std::runtime_error("write failed for '" + file.string() + "'");
}

}  // namespace dimrate
