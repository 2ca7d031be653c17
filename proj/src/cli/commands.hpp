#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nodedens::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kRuntime = 2, kValidationFailed = 3 };

/// Runs the command line `args` (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// "distributions", "estimators" or "all". Throws std::invalid_argument for other names.
std::vector<CheckResult> run_suite(std::string_view suite, std::uint64_t seed);

/// Parses one decimal number per line. Blank lines are skipped but counted.
/// Throws DataError naming the offending line.
struct NumberedValue {
  std::size_t line;
  double value;
};
std::vector<NumberedValue> parse_power_lines(std::istream& in);

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nodedens::cli
