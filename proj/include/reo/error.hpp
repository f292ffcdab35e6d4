#pragma once

#include <stdexcept>
#include <string>

namespace reo {

/// Broad classification used by the command line front end to pick an exit
/// status: data problems exit with 1, configuration problems with 2.
enum class ErrorKind { Data, Config };

/// Every failure raised by the toolkit. `code()` is module-qualified, e.g.
/// "metrics.degenerate_group" or "ingest.parse".
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

inline Error data_error(std::string code, const std::string& message) {
  return Error(ErrorKind::Data, std::move(code), message);
}

inline Error config_error(std::string code, const std::string& message) {
  return Error(ErrorKind::Config, std::move(code), message);
}

}  // namespace reo
