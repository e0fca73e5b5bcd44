#include "csv.hpp"

#include <cmath>
#include <cstdio>

#include <bakerlab/errors.hpp>

namespace bakerlab::cli {

namespace {

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  std::string s = buffer;
  // snprintf honours LC_NUMERIC; force the decimal point.
  for (char& c : s)
    if (c == ',') c = '.';
  return s;
}

CsvTable& CsvTable::row() {
  cells_.emplace_back();
  return *this;
}

CsvTable& CsvTable::add(double value) { return add(format_real(value)); }

CsvTable& CsvTable::add(long value) { return add(std::to_string(value)); }

CsvTable& CsvTable::add(const std::string& value) {
  require(!cells_.empty(), "csv: add() before row()");
  cells_.back().push_back(value);
  return *this;
}

void CsvTable::write(std::ostream& out, const std::string& command, const ParameterList& params,
                     const std::vector<std::string>& comments) const {
  out << "# bakerlab " << BAKERLAB_VERSION << ' ' << command;
  for (const auto& [key, value] : params) out << ' ' << key << '=' << value;
  out << "\r\n";
  for (const auto& line : comments) out << "# " << line << "\r\n";
  for (std::size_t i = 0; i < header_.size(); ++i) out << (i ? "," : "") << quote(header_[i]);
  out << "\r\n";
  for (const auto& r : cells_) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << quote(r[i]);
    out << "\r\n";
  }
}

}  // namespace bakerlab::cli
