#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace bakerlab::cli {

/// 17 significant digits, '.' decimal point regardless of locale.
std::string format_real(double value);

/// Ordered key=value parameter list for the comment line and the manifest.
using ParameterList = std::vector<std::pair<std::string, std::string>>;

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  CsvTable& row();
  CsvTable& add(double value);
  CsvTable& add(long value);
  CsvTable& add(int value) { return add(static_cast<long>(value)); }
  CsvTable& add(bool value) { return add(static_cast<long>(value)); }
  CsvTable& add(const std::string& value);

  std::size_t rows() const { return cells_.size(); }
  const std::vector<std::string>& header() const { return header_; }

  /// "# bakerlab <version> <command> k=v ..." then extra comment lines,
  /// the header row and the data rows.
  void write(std::ostream& out, const std::string& command, const ParameterList& params,
             const std::vector<std::string>& comments = {}) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> cells_;
};

}  // namespace bakerlab::cli
