#include "loops/error.hpp"

namespace loops {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::InvalidFormat: return "InvalidFormat";
    case ErrorCode::PointOnCurve: return "PointOnCurve";
    case ErrorCode::DegenerateLoop: return "DegenerateLoop";
    case ErrorCode::NotSimple: return "NotSimple";
    case ErrorCode::InvalidWindow: return "InvalidWindow";
    case ErrorCode::WindowViolation: return "WindowViolation";
    case ErrorCode::EmptyBatch: return "EmptyBatch";
    case ErrorCode::AllZeroWeights: return "AllZeroWeights";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::DegenerateDesign: return "DegenerateDesign";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::TouchesFrame: return "TouchesFrame";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::InvalidStart: return "InvalidStart";
    case ErrorCode::NotAnnular: return "NotAnnular";
    case ErrorCode::PreconditionFailed: return "PreconditionFailed";
    case ErrorCode::UnknownExperiment: return "UnknownExperiment";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace loops
