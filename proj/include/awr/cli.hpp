#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace awr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitScenarioRejected = 3;

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct RunManifest {
  std::string config_digest;  // 16 hex digits
  std::string experiment;
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;
  std::vector<CheckResult> checks;
  bool all_passed = false;
};

/// Writes `value` with 17 significant digits ("%.17g").
std::string format_double(double value);

/// Runs the batch driver on `args` (without the program name). Returns the
/// process exit code; progress goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace awr::cli
