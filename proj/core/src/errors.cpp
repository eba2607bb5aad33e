#include "bennett8/errors.hpp"

#include <utility>

namespace bennett8 {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateCircle: return "DegenerateCircle";
    case ErrorCode::ParallelLines: return "ParallelLines";
    case ErrorCode::NoFiniteAxis: return "NoFiniteAxis";
    case ErrorCode::DegenerateBranch: return "DegenerateBranch";
    case ErrorCode::ClosureFailure: return "ClosureFailure";
    case ErrorCode::CollapsedPose: return "CollapsedPose";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::string constraint)
    : std::runtime_error(message), code_(code), constraint_(std::move(constraint)) {}

}  // namespace bennett8
