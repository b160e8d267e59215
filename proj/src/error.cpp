#include "ptcycle/error.hpp"

namespace ptcycle {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::BrokenRegimeGamma: return "BrokenRegimeGamma";
    case ErrorCode::NonClassifiableMu: return "NonClassifiableMu";
    case ErrorCode::RealGapUnbounded: return "RealGapUnbounded";
    case ErrorCode::OutsideRealityWindow: return "OutsideRealityWindow";
    case ErrorCode::NoCoincidence: return "NoCoincidence";
    case ErrorCode::NonNormalizable: return "NonNormalizable";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotBracketed: return "NotBracketed";
    case ErrorCode::MaxIters: return "MaxIters";
    case ErrorCode::MaxDepth: return "MaxDepth";
    case ErrorCode::EvaluationFailed: return "EvaluationFailed";
    case ErrorCode::NoRootInBracket: return "NoRootInBracket";
    case ErrorCode::BranchLost: return "BranchLost";
    case ErrorCode::MultiValued: return "MultiValued";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::CycleInfeasible: return "CycleInfeasible";
    case ErrorCode::InvalidRatio: return "InvalidRatio";
    case ErrorCode::OutOfBinodal: return "OutOfBinodal";
    case ErrorCode::RootNotBracketed: return "RootNotBracketed";
  }
  return "Unknown";
}

}  // namespace ptcycle
