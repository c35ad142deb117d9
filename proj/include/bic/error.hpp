#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bic {

enum class ErrorCode {
  MalformedRow,
  NonMonotonicPeriod,
  EmptyInput,
  PeriodMismatch,
  TooShort,
  DegenerateSample,
  ZeroEvidence,
  LengthMismatch,
  InvalidArgument,
  ConfigInvalid,
  IoFailure,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries a code and the module that
// raised it, so the CLI can map it to an exit status and report provenance.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string module, const std::string& what)
      : std::runtime_error(what), code_(code), module_(std::move(module)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorCode code_;
  std::string module_;
};

}  // namespace bic
