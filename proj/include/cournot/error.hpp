#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cournot {

enum class ErrorCode {
  InvalidParameter,
  NonPositiveScale,
  OutOfSupport,
  ZeroSurvival,
  NonPositivePoint,
  QuadratureFailure,
  InconsistentVerdict,
  AssumptionViolated,
  EmptyRegion,
  ConfigParse,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Process exit status used by the command-line front end for each error kind.
/// 0 is success; every code below is distinct and stable.
int exit_code(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cournot
