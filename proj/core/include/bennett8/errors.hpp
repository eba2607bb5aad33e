#pragma once

#include <stdexcept>
#include <string>

namespace bennett8 {

enum class ErrorCode {
  DegenerateCircle,
  ParallelLines,
  NoFiniteAxis,
  DegenerateBranch,
  ClosureFailure,
  CollapsedPose,
  InvalidSpec,
};

const char* to_string(ErrorCode code);

// Single exception type for all geometric and validation failures.
// `constraint` names the violated rule for InvalidSpec, empty otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string constraint = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& constraint() const noexcept { return constraint_; }

 private:
  ErrorCode code_;
  std::string constraint_;
};

}  // namespace bennett8
