#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bakerlab::cli {

enum ExitCode : int { ok = 0, validation_failure = 2, numerical_failure = 3 };

/// Everything a subcommand may read. Unset optionals fall back to the
/// command's documented defaults.
struct RunConfig {
  std::string command;
  std::vector<int> sizes;  ///< --n or --n-list
  std::optional<std::string> observable_path;
  std::optional<double> delta;
  std::optional<double> gamma;
  std::optional<double> sigma;
  std::optional<double> eps;
  std::optional<int> time;
  std::optional<double> fejer_width;
  std::optional<int> kmax;
  std::optional<int> grid;
  std::optional<std::string> output_path;
  std::optional<std::string> diagonal_path;
  double q = 0.3;
  double p = 0.4;
  int tmax = 12;
  bool strict = false;
  bool force = false;
  unsigned threads = 0;
};

/// Parses argv and runs one subcommand. CSV goes to `out` unless --out is
/// given; messages go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bakerlab::cli
