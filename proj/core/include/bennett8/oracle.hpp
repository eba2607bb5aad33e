#pragma once

#include <vector>

#include <Eigen/Core>

// Brute-force loop-closure solving from side data alone. Nothing here knows
// about the transmission law; agreement with the analytic modules is evidence.
namespace bennett8::oracle {

// One step of a loop: rotate by sign * theta[joint] about the joint axis (z),
// then move along the next link: rotate by `twist` about and shift by
// `offset` along the link direction (x).
struct LoopEdge {
  int joint = 0;
  int sign = 1;
  double twist = 0.0;
  double offset = 0.0;
};

// Several closed loops sharing joint variables. Spherical loops only
// constrain the rotation part.
struct LoopSystem {
  int num_joints = 0;
  bool spatial = false;
  std::vector<std::vector<LoopEdge>> loops;
};

// Single closed chain: side k runs from joint k to joint k + 1.
struct LoopProblem {
  std::vector<double> twists;
  std::vector<double> offsets;  // empty for a spherical chain
  int driving_joint = 0;
  double driving_value = 0.0;
  std::vector<double> initial;  // one entry per joint; the driving entry is ignored

  bool spatial() const { return !offsets.empty(); }
  LoopSystem system() const;
};

struct SolveResult {
  std::vector<double> angles;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;  // residual norm before each iteration, then the final one
};

inline constexpr double kConvergedResidual = 1e-11;
inline constexpr int kMaxIterations = 100;
inline constexpr int kMaxHalvings = 30;
inline constexpr double kDifferenceStep = 1e-6;
inline constexpr double kRankTol = 1e-7;

Eigen::VectorXd closure_residual(const LoopSystem& system, const std::vector<double>& angles);
Eigen::MatrixXd closure_jacobian(const LoopSystem& system, const std::vector<double>& angles);

// Damped Newton with the driving joint held fixed. Never throws on failure:
// the result carries `converged = false` and the last iterate.
SolveResult solve_system(const LoopSystem& system, int driving_joint, double driving_value,
                         std::vector<double> initial);
SolveResult solve_loop(const LoopProblem& problem);

// Kernel dimension of the closure Jacobian with every joint free:
// columns minus the count of singular values above kRankTol * sigma_max.
int jacobian_nullity(const LoopSystem& system, const std::vector<double>& angles);
int jacobian_nullity(const LoopProblem& problem, const std::vector<double>& angles);

}  // namespace bennett8::oracle
