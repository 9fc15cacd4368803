#pragma once

#include <stdexcept>
#include <string>

namespace ore {

// All thrown errors carry a short machine-greppable code; the CLI prints
// `<code>: <message>` and maps codes to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

struct ParseError : Error {
  explicit ParseError(const std::string& m) : Error("E_PARSE", m) {}
};

struct ValidationError : Error {
  explicit ValidationError(const std::string& m) : Error("E_VALIDATION", m) {}
};

struct LookupError : Error {
  explicit LookupError(const std::string& m) : Error("E_LOOKUP", m) {}
};

struct BudgetError : Error {
  explicit BudgetError(const std::string& m) : Error("E_BUDGET", m) {}
};

struct IoError : Error {
  explicit IoError(const std::string& m) : Error("E_IO", m) {}
};

struct UsageError : Error {
  explicit UsageError(const std::string& m) : Error("E_USAGE", m) {}
};

}  // namespace ore
