#include "hyperdet/error.hpp"

namespace hyperdet {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ZeroDirection: return "ZeroDirection";
    case ErrorCode::DegenerateLeadingCoefficient: return "DegenerateLeadingCoefficient";
    case ErrorCode::NotReal: return "NotReal";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::EndpointNotStrict: return "EndpointNotStrict";
    case ErrorCode::IllConditionedNodes: return "IllConditionedNodes";
    case ErrorCode::NonRealRoots: return "NonRealRoots";
    case ErrorCode::BasisConditioningFailed: return "BasisConditioningFailed";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::StartNotStrict: return "StartNotStrict";
    case ErrorCode::NotHyperbolic: return "NotHyperbolic";
    case ErrorCode::LeadingCoefficientZero: return "LeadingCoefficientZero";
    case ErrorCode::SolveFailed: return "SolveFailed";
    case ErrorCode::DegenerateD: return "DegenerateD";
    case ErrorCode::RepeatedD: return "RepeatedD";
    case ErrorCode::InternalInconsistency: return "InternalInconsistency";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InhomogeneousInput: return "InhomogeneousInput";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace hyperdet
