#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ptcycle {

enum class ErrorCode {
  BrokenRegimeGamma,
  NonClassifiableMu,
  RealGapUnbounded,
  OutsideRealityWindow,
  NoCoincidence,
  NonNormalizable,
  InvalidArgument,
  NotBracketed,
  MaxIters,
  MaxDepth,
  EvaluationFailed,
  NoRootInBracket,
  BranchLost,
  MultiValued,
  QuadratureNotConverged,
  CycleInfeasible,
  InvalidRatio,
  OutOfBinodal,
  RootNotBracketed,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the library carries one of the codes above; the
// CLI prints them as `code: detail`.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace ptcycle
