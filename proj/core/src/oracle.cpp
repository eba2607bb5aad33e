#include "bennett8/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace bennett8::oracle {

namespace {

Eigen::Matrix4d rot_z(double t) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  const double c = std::cos(t), s = std::sin(t);
  m(0, 0) = c;
  m(0, 1) = -s;
  m(1, 0) = s;
  m(1, 1) = c;
  return m;
}

Eigen::Matrix4d link_x(double twist, double offset) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  const double c = std::cos(twist), s = std::sin(twist);
  m(1, 1) = c;
  m(1, 2) = -s;
  m(2, 1) = s;
  m(2, 2) = c;
  m(0, 3) = offset;
  return m;
}

int rows_per_loop(const LoopSystem& system) { return system.spatial ? 12 : 9; }

}  // namespace

LoopSystem LoopProblem::system() const {
  const int n = static_cast<int>(twists.size());
  if (n < 3) throw std::invalid_argument("a loop needs at least three sides");
  if (spatial() && static_cast<int>(offsets.size()) != n) {
    throw std::invalid_argument("offsets must match twists one to one");
  }
  LoopSystem sys;
  sys.num_joints = n;
  sys.spatial = spatial();
  std::vector<LoopEdge> loop;
  for (int k = 0; k < n; ++k) loop.push_back({k, 1, twists[k], spatial() ? offsets[k] : 0.0});
  sys.loops.push_back(std::move(loop));
  return sys;
}

Eigen::VectorXd closure_residual(const LoopSystem& system, const std::vector<double>& angles) {
  const int rows = rows_per_loop(system);
  Eigen::VectorXd r(rows * static_cast<int>(system.loops.size()));
  for (size_t l = 0; l < system.loops.size(); ++l) {
    Eigen::Matrix4d M = Eigen::Matrix4d::Identity();
    for (const LoopEdge& e : system.loops[l]) {
      M = M * rot_z(e.sign * angles.at(e.joint)) * link_x(e.twist, e.offset);
    }
    const Eigen::Matrix3d D = M.topLeftCorner<3, 3>() - Eigen::Matrix3d::Identity();
    const int base = rows * static_cast<int>(l);
    for (int i = 0; i < 9; ++i) r(base + i) = D(i % 3, i / 3);
    if (system.spatial) r.segment<3>(base + 9) = M.topRightCorner<3, 1>();
  }
  return r;
}

Eigen::MatrixXd closure_jacobian(const LoopSystem& system, const std::vector<double>& angles) {
  const Eigen::VectorXd r0 = closure_residual(system, angles);
  Eigen::MatrixXd J(r0.size(), system.num_joints);
  std::vector<double> x = angles;
  for (int j = 0; j < system.num_joints; ++j) {
    x[j] = angles[j] + kDifferenceStep;
    const Eigen::VectorXd rp = closure_residual(system, x);
    x[j] = angles[j] - kDifferenceStep;
    const Eigen::VectorXd rm = closure_residual(system, x);
    x[j] = angles[j];
    J.col(j) = (rp - rm) / (2.0 * kDifferenceStep);
  }
  return J;
}

SolveResult solve_system(const LoopSystem& system, int driving_joint, double driving_value,
                         std::vector<double> initial) {
  if (static_cast<int>(initial.size()) != system.num_joints) {
    throw std::invalid_argument("initial guess must have one entry per joint");
  }
  initial[driving_joint] = driving_value;
  std::vector<int> free;
  for (int j = 0; j < system.num_joints; ++j) {
    if (j != driving_joint) free.push_back(j);
  }

  SolveResult out;
  out.angles = std::move(initial);
  double norm = closure_residual(system, out.angles).norm();
  for (int it = 0; it < kMaxIterations; ++it) {
    out.history.push_back(norm);
    if (norm < kConvergedResidual) break;
    ++out.iterations;
    const Eigen::VectorXd r = closure_residual(system, out.angles);
    const Eigen::MatrixXd J = closure_jacobian(system, out.angles);
    Eigen::MatrixXd Jf(J.rows(), static_cast<int>(free.size()));
    for (size_t k = 0; k < free.size(); ++k) Jf.col(static_cast<int>(k)) = J.col(free[k]);
    const Eigen::VectorXd step = Jf.completeOrthogonalDecomposition().solve(-r);

    bool accepted = false;
    double scale = 1.0;
    for (int h = 0; h <= kMaxHalvings; ++h, scale *= 0.5) {
      std::vector<double> trial = out.angles;
      for (size_t k = 0; k < free.size(); ++k) trial[free[k]] += scale * step(static_cast<int>(k));
      const double trial_norm = closure_residual(system, trial).norm();
      if (trial_norm < norm) {
        out.angles = std::move(trial);
        norm = trial_norm;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (out.history.empty() || out.history.back() != norm) out.history.push_back(norm);
  out.residual = norm;
  out.converged = norm < kConvergedResidual;
  return out;
}

SolveResult solve_loop(const LoopProblem& problem) {
  return solve_system(problem.system(), problem.driving_joint, problem.driving_value, problem.initial);
}

int jacobian_nullity(const LoopSystem& system, const std::vector<double>& angles) {
  const Eigen::MatrixXd J = closure_jacobian(system, angles);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > kRankTol * smax) ++rank;
  }
  return system.num_joints - rank;
}

int jacobian_nullity(const LoopProblem& problem, const std::vector<double>& angles) {
  return jacobian_nullity(problem.system(), angles);
}

}  // namespace bennett8::oracle
