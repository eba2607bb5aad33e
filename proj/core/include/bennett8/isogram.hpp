#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "bennett8/dual.hpp"
#include "bennett8/screw_geom.hpp"
#include "bennett8/sphere_geom.hpp"

namespace bennett8 {

// Sign in the denominator of the transmission law.
enum class Branch { Plus, Minus };

const char* to_string(Branch b);
std::optional<Branch> parse_branch(std::string_view s);
inline int branch_sign(Branch b) { return b == Branch::Plus ? 1 : -1; }

inline constexpr double kDenominatorTol = 1e-10;
inline constexpr double kCellClosureTol = 1e-9;

struct SphericalIsogramSpec {
  double alpha = 0.0;  // basis and coupler arc
  double beta = 0.0;   // arm arc
  Branch branch = Branch::Plus;
};

// Vertices in cyclic order A, B, C, D with basis AB on the fixed circle.
// sides: AB (fixed circle), BC (arm at B), DC (coupler, oriented D to C), DA (arm at A).
struct SphericalIsogramPose {
  SpherePoint A, B, C, D;
  std::array<OrientedGreatCircle, 4> sides;
  double phi1 = 0.0;
  double phi2 = 0.0;
  double closure_residual = 0.0;
};

struct IsogramSymmetry {
  SpherePoint S;         // intersection of the diagonal circles (tie-broken)
  OrientedGreatCircle s;  // circle with pole S
  bool crossed = false;   // true when the swap is the reflection in s rather than the half-turn about S
};

struct BennettIsogramSpec {
  double alpha_twist = 0.0;
  double beta_twist = 0.0;
  double a_len = 0.0;
  double b_len = 0.0;  // signed: carries the branch sign of the proportion
  Branch branch = Branch::Plus;
};

// Hinges, sides and vertices in the same cyclic order as the spherical pose.
struct BennettIsogramPose {
  std::array<OrientedLine, 4> hinges;
  std::array<OrientedLine, 4> sides;
  std::array<Vec3, 4> vertices;
  double phi1 = 0.0;
  double phi2 = 0.0;
  double closure_residual = 0.0;
};

// Ratio of the half-angle tangents at the two basis joints, in the sign
// convention under which the loop closes (arms hang backward from the
// basis at signed arc -beta, both angles counterclockwise seen from outside).
double transmission_coefficient(const SphericalIsogramSpec& spec);

double coupled_angle(double c21, double phi1);

SphericalIsogramPose solve_spherical_isogram(const SphericalIsogramSpec& spec, const OrientedGreatCircle& g0,
                                             const SpherePoint& P, double phi1);

IsogramSymmetry isogram_symmetry_spherical(const SphericalIsogramPose& pose);

// Transmission law evaluated with dual twists alpha + eps a and beta + eps b.
Dual bennett_dual_coefficient(const BennettIsogramSpec& spec);

// Relative residual of a sin(beta) = sign * b sin(alpha).
double bennett_proportion_residual(const BennettIsogramSpec& spec);

// Arm offset that satisfies the proportion for the given branch.
double bennett_offset(double alpha, double beta, double a, Branch branch);

// base_hinge must cut `base` at right angles; it becomes hinge A.
BennettIsogramPose solve_bennett_isogram(const BennettIsogramSpec& spec, const OrientedLine& base,
                                         const OrientedLine& base_hinge, double phi1);

OrientedLine bennett_symmetry_axis(const BennettIsogramPose& pose);

// Interior angle at V of the spherical polygon corner U-V-W, in [0, pi].
double interior_angle(const SpherePoint& U, const SpherePoint& V, const SpherePoint& W);

}  // namespace bennett8
