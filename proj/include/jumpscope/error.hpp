#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace jumpscope {

enum class ErrorCode {
  InvalidArgument,
  InvalidClass,
  DomainTooSmall,
  OutOfDomain,
  ModeUnsupportedKinks,
  NotRefinable,
  InvalidSpec,
  ConstraintsInfeasible,
  ParseError,
  NonUniformGrid,
  DomainNotUnit,
  IoError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidClass: return "InvalidClass";
    case ErrorCode::DomainTooSmall: return "DomainTooSmall";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::ModeUnsupportedKinks: return "ModeUnsupportedKinks";
    case ErrorCode::NotRefinable: return "NotRefinable";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::ConstraintsInfeasible: return "ConstraintsInfeasible";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NonUniformGrid: return "NonUniformGrid";
    case ErrorCode::DomainNotUnit: return "DomainNotUnit";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above, so
/// callers (the CLI in particular) can map errors without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace jumpscope
