#pragma once

// The `onedigit` command-line front end, callable in-process for tests.

#include <chrono>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace onedigit::cli {

/// Process exit codes. Stable; documented in the README.
enum ExitCode : int {
  kOk = 0,
  kIoError = 1,
  kUsageError = 2,
  kFormatError = 3,
  kVerificationFailed = 4,
  kBudgetTooLarge = 5,
};

/// Self-description embedded in every emitted document.
struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::string version;
  /// UTC, ISO 8601.
  std::string started;
  double duration_seconds = 0;

  nlohmann::json to_json() const;
};

std::string tool_version();

/// Runs one command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace onedigit::cli
