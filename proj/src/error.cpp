#include "cournot/error.hpp"

namespace cournot {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::NonPositiveScale: return "NonPositiveScale";
    case ErrorCode::OutOfSupport: return "OutOfSupport";
    case ErrorCode::ZeroSurvival: return "ZeroSurvival";
    case ErrorCode::NonPositivePoint: return "NonPositivePoint";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::InconsistentVerdict: return "InconsistentVerdict";
    case ErrorCode::AssumptionViolated: return "AssumptionViolated";
    case ErrorCode::EmptyRegion: return "EmptyRegion";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

int exit_code(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ConfigParse: return 2;
    case ErrorCode::AssumptionViolated: return 3;
    case ErrorCode::QuadratureFailure: return 4;
    case ErrorCode::InconsistentVerdict: return 5;
    case ErrorCode::InvalidParameter: return 6;
    case ErrorCode::NonPositiveScale: return 7;
    case ErrorCode::OutOfSupport: return 8;
    case ErrorCode::ZeroSurvival: return 9;
    case ErrorCode::NonPositivePoint: return 10;
    case ErrorCode::EmptyRegion: return 11;
    case ErrorCode::Io: return 12;
  }
  return 1;
}

}  // namespace cournot
