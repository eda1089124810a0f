#pragma once

#include <stdexcept>
#include <string>

namespace ealab {

enum class ErrorKind {
  NotFound,
  InvalidInput,
  DegenerateForm,
  InvalidRealization,
  NotLoxodromic,
  Parse,
};

const char* to_string(ErrorKind kind);

// Every library failure is reported through this type; `kind()` lets callers
// (the CLI in particular) map failures to exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ealab
