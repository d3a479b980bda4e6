#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mvshape::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kData = 2, kNumerical = 3 };

struct RunConfig {
  std::string command;
  std::filesystem::path input;
  std::filesystem::path out;
  /** Coefficient file, or "builtin" (simulate only). */
  std::string templ;
  int basis_size = 22;
  std::uint64_t seed = 0;
  double xi = 1e-4;
  int starts = 5;
  std::vector<double> sigma;
  int n = 500;
  std::string design = "multi";
  std::string method = "pls";
  int folds = 10;
  std::string scenario = "1";
  /** simulate: also write a labelled two-class contour set of n records. */
  bool two_class = false;
};

/** Throws DomainError for invalid settings (odd basis size, unknown command, ...). */
void validate(const RunConfig& config);

/** Execute one subcommand. Module errors are mapped to exit codes and written to `err` as a JSON record. */
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/** Parse flags (and an optional --config file) and run. */
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/** {"error": {"kind": .., "message": .., "exit_code": ..}} */
std::string error_record(const std::string& kind, const std::string& message, int exit_code);

}  // namespace mvshape::cli
