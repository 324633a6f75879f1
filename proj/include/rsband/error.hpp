#pragma once

#include <stdexcept>
#include <string>

namespace rsband {

/// Broad failure classes; the CLI maps each onto an exit code.
enum class ErrorKind {
  model,        // malformed or invalid input model (exit 2)
  numerical,    // solver / tracker / eigensolver failure (exit 3)
  consistency,  // a structural check on the result failed (exit 4)
};

/// Every library failure carries a stable name (e.g. "NonConvergence") that
/// is echoed verbatim into `summary.json`.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string name, const std::string& message)
      : std::runtime_error(name + ": " + message), kind_(kind), name_(std::move(name)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }

 private:
  ErrorKind kind_;
  std::string name_;
};

inline Error model_error(std::string name, const std::string& message) {
  return Error(ErrorKind::model, std::move(name), message);
}

inline Error numerical_error(std::string name, const std::string& message) {
  return Error(ErrorKind::numerical, std::move(name), message);
}

inline Error consistency_error(std::string name, const std::string& message) {
  return Error(ErrorKind::consistency, std::move(name), message);
}

}  // namespace rsband
