#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "bennett8/sphere_geom.hpp"

namespace bennett8 {

// Plücker line: unit direction d and moment m = p x d for any point p on it.
class OrientedLine {
 public:
  OrientedLine() : d_(0.0, 0.0, 1.0), m_(0.0, 0.0, 0.0) {}
  // Normalizes d (scaling m with it) and projects m onto the plane normal to d.
  OrientedLine(const Vec3& d, const Vec3& m);
  static OrientedLine through(const Vec3& point, const Vec3& direction);

  const Vec3& d() const { return d_; }
  const Vec3& m() const { return m_; }
  Vec3 point() const { return d_.cross(m_); }  // closest point to the origin
  OrientedLine reversed() const { return {-d_, -m_}; }

 private:
  Vec3 d_;
  Vec3 m_;
};

// Unit dual quaternion real + eps * dual.
class Displacement {
 public:
  Displacement() : real_(Eigen::Quaterniond::Identity()), dual_(0.0, 0.0, 0.0, 0.0) {}
  Displacement(const Eigen::Quaterniond& real, const Eigen::Quaterniond& dual) : real_(real), dual_(dual) {}

  // Rotation by `angle` about `axis` combined with `translation` along it (right-handed).
  static Displacement screw(const OrientedLine& axis, double angle, double translation);

  const Eigen::Quaterniond& real() const { return real_; }
  const Eigen::Quaterniond& dual() const { return dual_; }

 private:
  Eigen::Quaterniond real_;
  Eigen::Quaterniond dual_;
};

struct ScrewParams {
  OrientedLine axis;
  double angle = 0.0;        // (-pi, pi]
  double translation = 0.0;  // along axis.d()
};

struct CommonPerpendicular {
  OrientedLine axis;  // directed along d1 x d2, through foot1
  double distance = 0.0;
  double angle = 0.0;  // between d1 and d2, in [0, pi]
  Vec3 foot1;          // on l1
  Vec3 foot2;          // on l2
};

struct DualAngle {
  double angle = 0.0;
  double offset = 0.0;
};

inline constexpr double kParallelTol = 1e-10;
inline constexpr double kTranslationTol = 1e-9;

CommonPerpendicular common_perpendicular(const OrientedLine& l1, const OrientedLine& l2);
Displacement line_reflection(const OrientedLine& axis);
Displacement compose(const Displacement& D2, const Displacement& D1);
Displacement inverse(const Displacement& D);
Vec3 apply(const Displacement& D, const Vec3& point);
OrientedLine apply(const Displacement& D, const OrientedLine& line);
ScrewParams screw_axis(const Displacement& D);
DualAngle dual_angle(const OrientedLine& l1, const OrientedLine& l2);
OrientedLine midline_symmetry_axis(const OrientedLine& h1, const OrientedLine& h3rev);

// Point of `on` closest to `other`.
Vec3 closest_point(const OrientedLine& on, const OrientedLine& other);

// Signed screw parameters (angle about and shift along `along`) carrying
// line `from` onto line `to`; both are expected to cut `along` at right angles.
DualAngle signed_dual_arc(const OrientedLine& along, const OrientedLine& from, const OrientedLine& to);

// Residual helpers.
double line_difference(const OrientedLine& a, const OrientedLine& b);      // oriented
double line_set_difference(const OrientedLine& a, const OrientedLine& b);  // up to orientation
double displacement_distance(const Displacement& a, const Displacement& b);
double point_line_distance(const Vec3& p, const OrientedLine& l);
// Distance between the lines plus |cos| of their angle; zero iff they meet at right angles.
double orthogonal_meet_residual(const OrientedLine& a, const OrientedLine& b);
double study_residual(const Displacement& D);

}  // namespace bennett8
