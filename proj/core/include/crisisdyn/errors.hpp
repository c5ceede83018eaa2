#pragma once

#include <stdexcept>
#include <string>

namespace crisisdyn {

/// Error categories; the numeric value doubles as the CLI exit code.
enum class ErrorKind : int {
  config = 2,     // bad flags, bad config files, infeasible parameters
  data = 3,       // malformed or insufficient input data
  numerical = 4,  // eigensolver failures, PSD violations, non-convergence
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& message) : Error(ErrorKind::config, message) {}
};

struct DataError : Error {
  explicit DataError(const std::string& message) : Error(ErrorKind::data, message) {}
};

struct NumericalError : Error {
  explicit NumericalError(const std::string& message) : Error(ErrorKind::numerical, message) {}
};

}  // namespace crisisdyn
