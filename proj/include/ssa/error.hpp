#pragma once

#include <stdexcept>
#include <string>

namespace ssa {

// Machine-readable failure categories. The CLI maps these to exit codes and
// emits them verbatim in its JSON error output.
enum class ErrorCode {
  invalid_dimension,
  identifiability,
  singularity,
  constraint_infeasible,
  numerical,
  invalid_model,
  span_too_small,
  truncation_insufficient,
  insufficient_data,
  domain,
  io,
  parse,
  config,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        message_(message) {}

  ErrorCode code() const { return code_; }
  const std::string& message() const { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace ssa
