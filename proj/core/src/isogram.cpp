#include "bennett8/isogram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bennett8/errors.hpp"

namespace bennett8 {

namespace {

constexpr double kPi = std::numbers::pi;

template <class T>
T coefficient(T alpha, T beta, Branch branch) {
  using std::sin;
  const T denom = branch == Branch::Plus ? sin(alpha) + sin(beta) : sin(alpha) - sin(beta);
  if (std::abs(real_part(denom)) < kDenominatorTol) {
    throw Error(ErrorCode::DegenerateBranch, "transmission denominator vanishes for this branch");
  }
  // The plus branch carries the opposite numerator sign: with arms hanging
  // backward and same-sense joint angles, sin(beta - alpha) is what closes.
  const T num = branch == Branch::Plus ? sin(beta - alpha) : sin(alpha - beta);
  return num / denom;
}

void check_arc(double x, const char* name) {
  if (!(x > 0.0 && x < kPi)) {
    throw Error(ErrorCode::InvalidSpec, std::string(name) + " must lie in (0, pi)", std::string(name) + " in (0, pi)");
  }
}

}  // namespace

const char* to_string(Branch b) { return b == Branch::Plus ? "plus" : "minus"; }

std::optional<Branch> parse_branch(std::string_view s) {
  if (s == "plus") return Branch::Plus;
  if (s == "minus") return Branch::Minus;
  return std::nullopt;
}

double transmission_coefficient(const SphericalIsogramSpec& spec) {
  check_arc(spec.alpha, "alpha");
  check_arc(spec.beta, "beta");
  return coefficient(spec.alpha, spec.beta, spec.branch);
}

double coupled_angle(double c21, double phi1) {
  const double half = 0.5 * wrap_angle(phi1);
  // Homogeneous half-angle pair: (cos, c * sin) stays finite at phi1 = pi.
  return wrap_angle(2.0 * std::atan2(c21 * std::sin(half), std::cos(half)));
}

SphericalIsogramPose solve_spherical_isogram(const SphericalIsogramSpec& spec, const OrientedGreatCircle& g0,
                                             const SpherePoint& P, double phi1) {
  if (incidence(g0, P) > 1e-10) throw Error(ErrorCode::InvalidSpec, "basis point is not on the fixed circle");
  const double c = transmission_coefficient(spec);

  SphericalIsogramPose pose;
  pose.phi1 = phi1;
  pose.phi2 = coupled_angle(c, phi1);
  pose.A = P;
  pose.B = apply(rotation_about(SpherePoint(g0.n()), spec.alpha), P);
  const OrientedGreatCircle arm_a = apply(rotation_about(pose.A, pose.phi1), g0);
  const OrientedGreatCircle arm_b = apply(rotation_about(pose.B, pose.phi2), g0);
  pose.D = apply(rotation_about(SpherePoint(arm_a.n()), -spec.beta), pose.A);
  pose.C = apply(rotation_about(SpherePoint(arm_b.n()), -spec.beta), pose.B);
  const OrientedGreatCircle coupler = great_circle_through(pose.D, pose.C);
  pose.sides = {g0, arm_b, coupler, arm_a};

  pose.closure_residual = std::abs(spherical_distance(pose.D, pose.C) - spec.alpha);
  if (!(pose.closure_residual < kCellClosureTol)) {
    throw Error(ErrorCode::ClosureFailure,
                "isogram does not close: coupler arc differs from basis by " + std::to_string(pose.closure_residual));
  }
  return pose;
}

IsogramSymmetry isogram_symmetry_spherical(const SphericalIsogramPose& pose) {
  const Vec3 ac = pose.A.v().cross(pose.C.v());
  const Vec3 bd = pose.B.v().cross(pose.D.v());
  const Vec3 meet = ac.cross(bd);
  if (ac.norm() < kCoplanarTol || bd.norm() < kCoplanarTol || meet.norm() < kCoplanarTol * ac.norm() * bd.norm()) {
    throw Error(ErrorCode::CollapsedPose, "diagonal circles are not well defined");
  }
  IsogramSymmetry out;
  out.S = SpherePoint(tie_break(meet.normalized()));
  out.s = OrientedGreatCircle(out.S.v());
  const SpherePoint image = apply(half_turn(out.S), pose.A);
  out.crossed = point_difference(image, pose.C) > point_difference(image, antipode(pose.C));
  return out;
}

Dual bennett_dual_coefficient(const BennettIsogramSpec& spec) {
  return coefficient(Dual{spec.alpha_twist, spec.a_len}, Dual{spec.beta_twist, spec.b_len}, spec.branch);
}

double bennett_proportion_residual(const BennettIsogramSpec& spec) {
  const double lhs = spec.a_len * std::sin(spec.beta_twist);
  const double rhs = branch_sign(spec.branch) * spec.b_len * std::sin(spec.alpha_twist);
  const double scale = std::max({std::abs(lhs), std::abs(rhs), std::numeric_limits<double>::min()});
  return std::abs(lhs - rhs) / scale;
}

double bennett_offset(double alpha, double beta, double a, Branch branch) {
  return branch_sign(branch) * a * std::sin(beta) / std::sin(alpha);
}

BennettIsogramPose solve_bennett_isogram(const BennettIsogramSpec& spec, const OrientedLine& base,
                                         const OrientedLine& base_hinge, double phi1) {
  check_arc(spec.alpha_twist, "alpha");
  check_arc(spec.beta_twist, "beta");
  if (!(spec.a_len > 0.0)) throw Error(ErrorCode::InvalidSpec, "basis length must be positive", "a > 0");
  if (bennett_proportion_residual(spec) > 1e-10) {
    throw Error(ErrorCode::InvalidSpec, "offsets violate the proportion a sin(beta) = +-b sin(alpha)", "proportion");
  }
  if (orthogonal_meet_residual(base, base_hinge) > 1e-10) {
    throw Error(ErrorCode::InvalidSpec, "base hinge must cut the base line at right angles");
  }
  const double c = bennett_dual_coefficient(spec).re;

  BennettIsogramPose pose;
  pose.phi1 = phi1;
  pose.phi2 = coupled_angle(c, phi1);
  const OrientedLine& hinge_a = base_hinge;
  const OrientedLine hinge_b = apply(Displacement::screw(base, spec.alpha_twist, spec.a_len), hinge_a);
  const OrientedLine arm_a = apply(Displacement::screw(hinge_a, pose.phi1, 0.0), base);
  const OrientedLine arm_b = apply(Displacement::screw(hinge_b, pose.phi2, 0.0), base);
  const OrientedLine hinge_d = apply(Displacement::screw(arm_a, -spec.beta_twist, -spec.b_len), hinge_a);
  const OrientedLine hinge_c = apply(Displacement::screw(arm_b, -spec.beta_twist, -spec.b_len), hinge_b);
  const OrientedLine coupler = common_perpendicular(hinge_d, hinge_c).axis;

  pose.hinges = {hinge_a, hinge_b, hinge_c, hinge_d};
  pose.sides = {base, arm_b, coupler, arm_a};
  pose.vertices = {closest_point(hinge_a, base), closest_point(hinge_b, base), closest_point(hinge_c, coupler),
                   closest_point(hinge_d, coupler)};

  const DualAngle arc = signed_dual_arc(coupler, hinge_d, hinge_c);
  double residual = std::abs(wrap_angle(arc.angle - spec.alpha_twist)) + std::abs(arc.offset - spec.a_len);
  residual = std::max({residual, orthogonal_meet_residual(arm_a, hinge_d), orthogonal_meet_residual(arm_b, hinge_c),
                       orthogonal_meet_residual(arm_a, hinge_a), orthogonal_meet_residual(arm_b, hinge_b)});
  pose.closure_residual = residual;
  if (!(residual < kCellClosureTol)) {
    throw Error(ErrorCode::ClosureFailure,
                "Bennett loop does not close: residual " + std::to_string(residual));
  }
  return pose;
}

OrientedLine bennett_symmetry_axis(const BennettIsogramPose& pose) {
  if (pose.sides[3].d().cross(pose.sides[0].d()).norm() < kParallelTol) {
    throw Error(ErrorCode::CollapsedPose, "arms are aligned with the basis");
  }
  const auto& I = pose.hinges;
  double best = std::numeric_limits<double>::infinity();
  OrientedLine axis;
  for (const OrientedLine& target : {I[2], I[2].reversed()}) {
    OrientedLine candidate;
    try {
      candidate = midline_symmetry_axis(I[0], target);
    } catch (const Error&) {
      continue;
    }
    const Displacement r = line_reflection(candidate);
    const double residual = line_set_difference(apply(r, I[0]), I[2]) + line_set_difference(apply(r, I[1]), I[3]);
    if (residual < best) {
      best = residual;
      axis = candidate;
    }
  }
  if (!std::isfinite(best)) throw Error(ErrorCode::CollapsedPose, "diagonal hinges are parallel");
  return axis;
}

double interior_angle(const SpherePoint& U, const SpherePoint& V, const SpherePoint& W) {
  const Vec3 tu = U.v() - V.v() * V.v().dot(U.v());
  const Vec3 tw = W.v() - V.v() * V.v().dot(W.v());
  return std::atan2(tu.cross(tw).norm(), tu.dot(tw));
}

}  // namespace bennett8
