#pragma once

#include <stdexcept>
#include <string>

namespace isaacsfd {

enum class ErrorCode {
  InsufficientStencil,
  SingularInput,
  EmptyInterior,
  NonFiniteValue,
  GridMismatch,
  StencilEscape,
  EllipticityViolation,
  NegativeC,
  BoundViolation,
  DegenerateStencil,
  NonNestedGrids,
  DegenerateFit,
  ConfigError,
};

const char* error_code_name(ErrorCode code);

/// All library failures throw this; the code identifies the failure class
/// so callers can react without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace isaacsfd
