#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cptp/types.hpp"

namespace cptp {

/// Numeric CSV table: UTF-8, header row, every value printed with %.12e.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<Real>> rows;

  void add_row(std::vector<Real> row);
  std::string to_string() const;
  void write(const std::string& path) const;
};

std::string format_number(Real v);

/// Dump a factor as {"rows", "cols", "re": [...], "im": [...]} (column-major).
nlohmann::json factor_to_json(const Matrix& v);
Matrix factor_from_json(const nlohmann::json& j);

void write_json(const std::string& path, const nlohmann::json& j);

}  // namespace cptp
