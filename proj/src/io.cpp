#include "cptp/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace cptp {

std::string format_number(Real v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

void CsvTable::add_row(std::vector<Real> row) {
  if (row.size() != header.size()) throw Error("CSV row width does not match the header");
  rows.push_back(std::move(row));
}

std::string CsvTable::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
  return out.str();
}

void CsvTable::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << to_string();
}

nlohmann::json factor_to_json(const Matrix& v) {
  std::vector<Real> re(static_cast<std::size_t>(v.size())), im(re.size());
  for (Index i = 0; i < v.size(); ++i) {
    re[static_cast<std::size_t>(i)] = v.data()[i].real();
    im[static_cast<std::size_t>(i)] = v.data()[i].imag();
  }
  return {{"rows", v.rows()}, {"cols", v.cols()}, {"re", re}, {"im", im}};
}

Matrix factor_from_json(const nlohmann::json& j) {
  const Index rows = j.at("rows").get<Index>(), cols = j.at("cols").get<Index>();
  const auto re = j.at("re").get<std::vector<Real>>();
  const auto im = j.at("im").get<std::vector<Real>>();
  if (static_cast<Index>(re.size()) != rows * cols || re.size() != im.size()) {
    throw Error("factor dump has inconsistent sizes");
  }
  Matrix v(rows, cols);
  for (Index i = 0; i < v.size(); ++i) {
    v.data()[i] = Complex(re[static_cast<std::size_t>(i)], im[static_cast<std::size_t>(i)]);
  }
  return v;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace cptp
