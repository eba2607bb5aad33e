#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace bennett8 {

using Vec3 = Eigen::Vector3d;

// Two circles count as coplanar (and two points as equal or antipodal)
// when the norm of the cross product of their vectors drops below this.
inline constexpr double kCoplanarTol = 1e-10;

// Threshold for the "first nonzero coordinate is positive" sign rule.
inline constexpr double kTieBreakTol = 1e-9;

// Returns v or -v so that the first coordinate with |c| > kTieBreakTol is positive.
Vec3 tie_break(const Vec3& v);

// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

class SpherePoint {
 public:
  SpherePoint() : v_(0.0, 0.0, 1.0) {}
  explicit SpherePoint(const Vec3& v);  // renormalizes

  const Vec3& v() const { return v_; }

 private:
  Vec3 v_;
};

// A great circle stored as its unit normal; traversal is counterclockwise
// seen from the tip of the normal.
class OrientedGreatCircle {
 public:
  OrientedGreatCircle() : n_(0.0, 0.0, 1.0) {}
  explicit OrientedGreatCircle(const Vec3& normal);  // renormalizes

  const Vec3& n() const { return n_; }
  OrientedGreatCircle reversed() const;

 private:
  Vec3 n_;
};

class SphericalRotation {
 public:
  SphericalRotation() : q_(Eigen::Quaterniond::Identity()) {}
  explicit SphericalRotation(const Eigen::Quaterniond& q);  // renormalizes

  const Eigen::Quaterniond& q() const { return q_; }
  bool is_half_turn() const;
  double angle() const;  // in [0, pi] after choosing w >= 0
  Vec3 axis() const;     // unit axis matching angle(); ez for the identity

 private:
  Eigen::Quaterniond q_;
};

struct SymmetryCenters {
  SpherePoint S;
  SpherePoint S_star;
  OrientedGreatCircle mirror;
};

SpherePoint antipode(const SpherePoint& P);
double spherical_distance(const SpherePoint& P, const SpherePoint& Q);
OrientedGreatCircle great_circle_through(const SpherePoint& P, const SpherePoint& Q);
double circle_angle(const OrientedGreatCircle& g1, const OrientedGreatCircle& g2);
OrientedGreatCircle common_perpendicular_circle(const OrientedGreatCircle& g1,
                                                const OrientedGreatCircle& g2);
SphericalRotation rotation_about(const SpherePoint& P, double phi);
SphericalRotation half_turn(const SpherePoint& P);
SymmetryCenters symmetry_centers(const OrientedGreatCircle& g1, const OrientedGreatCircle& g2);

SpherePoint reflect_in_circle(const OrientedGreatCircle& s, const SpherePoint& x);
OrientedGreatCircle reflect_in_circle(const OrientedGreatCircle& s, const OrientedGreatCircle& x);

SphericalRotation compose(const SphericalRotation& r2, const SphericalRotation& r1);
SphericalRotation inverse(const SphericalRotation& r);
SpherePoint apply(const SphericalRotation& r, const SpherePoint& x);
OrientedGreatCircle apply(const SphericalRotation& r, const OrientedGreatCircle& x);

OrientedGreatCircle bisector_circle(const SpherePoint& P, const SpherePoint& Q);

// Signed arc from `from` to `to`, counterclockwise about the normal of g.
double signed_arc(const OrientedGreatCircle& g, const SpherePoint& from, const SpherePoint& to);

// Residual helpers. Rotations compare up to quaternion sign; axes compare up to antipode.
double rotation_distance(const SphericalRotation& a, const SphericalRotation& b);
double circle_difference(const OrientedGreatCircle& a, const OrientedGreatCircle& b);
double plane_difference(const OrientedGreatCircle& a, const OrientedGreatCircle& b);
double point_difference(const SpherePoint& a, const SpherePoint& b);
double axis_difference(const SpherePoint& a, const SpherePoint& b);
double incidence(const OrientedGreatCircle& g, const SpherePoint& P);

}  // namespace bennett8
