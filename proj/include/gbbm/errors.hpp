#pragma once

#include <stdexcept>
#include <string>

namespace gbbm {

/// Process exit codes shared by the library and the command-line tool.
enum class ExitCode : int {
  kOk = 0,
  kConfig = 2,
  kResourceCeiling = 3,
  kVerificationFailure = 4,
  kNonConvergence = 5,
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a projected enumeration exceeds the configured ceiling.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gbbm
