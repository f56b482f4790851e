#pragma once

#include <stdexcept>
#include <string>

namespace hyperdet {

enum class ErrorCode {
  InvalidArgument,
  ZeroDirection,
  DegenerateLeadingCoefficient,
  NotReal,
  DegreeMismatch,
  EndpointNotStrict,
  IllConditionedNodes,
  NonRealRoots,
  BasisConditioningFailed,
  SingularJacobian,
  StartNotStrict,
  NotHyperbolic,
  LeadingCoefficientZero,
  SolveFailed,
  DegenerateD,
  RepeatedD,
  InternalInconsistency,
  ParseError,
  InhomogeneousInput,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-readable code. Every failure surfaced by the
/// core library is one of these; the C API maps the code onto hd_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace hyperdet
