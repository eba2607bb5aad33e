#include "bennett8/sphere_geom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bennett8/errors.hpp"

namespace bennett8 {

namespace {

Vec3 unit(const Vec3& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("cannot normalize a zero or non-finite vector");
  return v / n;
}

Vec3 reflect_vector(const Vec3& mirror_normal, const Vec3& v) {
  return v - 2.0 * mirror_normal.dot(v) * mirror_normal;
}

}  // namespace

Vec3 tie_break(const Vec3& v) {
  for (int i = 0; i < 3; ++i) {
    if (std::abs(v[i]) > kTieBreakTol) return v[i] > 0.0 ? v : Vec3(-v);
  }
  return v;
}

double wrap_angle(double a) {
  constexpr double pi = std::numbers::pi;
  double r = std::remainder(a, 2.0 * pi);
  if (r <= -pi) r += 2.0 * pi;
  return r;
}

SpherePoint::SpherePoint(const Vec3& v) : v_(unit(v)) {}

OrientedGreatCircle::OrientedGreatCircle(const Vec3& normal) : n_(unit(normal)) {}

OrientedGreatCircle OrientedGreatCircle::reversed() const { return OrientedGreatCircle(-n_); }

SphericalRotation::SphericalRotation(const Eigen::Quaterniond& q) : q_(q.normalized()) {}

bool SphericalRotation::is_half_turn() const { return std::abs(q_.w()) < 1e-12; }

double SphericalRotation::angle() const {
  return 2.0 * std::atan2(q_.vec().norm(), std::abs(q_.w()));
}

Vec3 SphericalRotation::axis() const {
  const Vec3 v = q_.w() < 0.0 ? Vec3(-q_.vec()) : Vec3(q_.vec());
  const double n = v.norm();
  return n > 0.0 ? Vec3(v / n) : Vec3::UnitZ();
}

SpherePoint antipode(const SpherePoint& P) { return SpherePoint(-P.v()); }

double spherical_distance(const SpherePoint& P, const SpherePoint& Q) {
  return std::atan2(P.v().cross(Q.v()).norm(), P.v().dot(Q.v()));
}

OrientedGreatCircle great_circle_through(const SpherePoint& P, const SpherePoint& Q) {
  const Vec3 c = P.v().cross(Q.v());
  if (c.norm() < kCoplanarTol) {
    throw Error(ErrorCode::DegenerateCircle, "points are equal or antipodal");
  }
  return OrientedGreatCircle(c);
}

double circle_angle(const OrientedGreatCircle& g1, const OrientedGreatCircle& g2) {
  const double theta = std::atan2(g1.n().cross(g2.n()).norm(), g1.n().dot(g2.n()));
  return std::min(theta, std::numbers::pi - theta);
}

OrientedGreatCircle common_perpendicular_circle(const OrientedGreatCircle& g1,
                                                const OrientedGreatCircle& g2) {
  const Vec3 c = g1.n().cross(g2.n());
  if (c.norm() < kCoplanarTol) {
    throw Error(ErrorCode::DegenerateCircle, "circles span the same plane");
  }
  return OrientedGreatCircle(tie_break(c.normalized()));
}

SphericalRotation rotation_about(const SpherePoint& P, double phi) {
  const double s = std::sin(0.5 * phi);
  return SphericalRotation(Eigen::Quaterniond(std::cos(0.5 * phi), s * P.v().x(), s * P.v().y(), s * P.v().z()));
}

SphericalRotation half_turn(const SpherePoint& P) {
  return SphericalRotation(Eigen::Quaterniond(0.0, P.v().x(), P.v().y(), P.v().z()));
}

SymmetryCenters symmetry_centers(const OrientedGreatCircle& g1, const OrientedGreatCircle& g2) {
  if (g1.n().cross(g2.n()).norm() < kCoplanarTol) {
    throw Error(ErrorCode::DegenerateCircle, "circles span the same plane");
  }
  // The half-turn about the normalized sum of the normals swaps them, and
  // so does the reflection in the circle having that point as its pole.
  const Vec3 S = tie_break((g1.n() + g2.n()).normalized());
  return {SpherePoint(S), SpherePoint(-S), OrientedGreatCircle(S)};
}

SpherePoint reflect_in_circle(const OrientedGreatCircle& s, const SpherePoint& x) {
  return SpherePoint(reflect_vector(s.n(), x.v()));
}

OrientedGreatCircle reflect_in_circle(const OrientedGreatCircle& s, const OrientedGreatCircle& x) {
  // A reflection reverses orientation, so the mirrored normal flips sign.
  return OrientedGreatCircle(-reflect_vector(s.n(), x.n()));
}

SphericalRotation compose(const SphericalRotation& r2, const SphericalRotation& r1) {
  return SphericalRotation(r2.q() * r1.q());
}

SphericalRotation inverse(const SphericalRotation& r) { return SphericalRotation(r.q().conjugate()); }

SpherePoint apply(const SphericalRotation& r, const SpherePoint& x) { return SpherePoint(r.q() * x.v()); }

OrientedGreatCircle apply(const SphericalRotation& r, const OrientedGreatCircle& x) {
  return OrientedGreatCircle(r.q() * x.n());
}

OrientedGreatCircle bisector_circle(const SpherePoint& P, const SpherePoint& Q) {
  if (P.v().cross(Q.v()).norm() < kCoplanarTol) {
    throw Error(ErrorCode::DegenerateCircle, "bisector of equal or antipodal points");
  }
  return OrientedGreatCircle(Q.v() - P.v());
}

double signed_arc(const OrientedGreatCircle& g, const SpherePoint& from, const SpherePoint& to) {
  return std::atan2(from.v().cross(to.v()).dot(g.n()), from.v().dot(to.v()));
}

double rotation_distance(const SphericalRotation& a, const SphericalRotation& b) {
  const Eigen::Vector4d x = a.q().coeffs();
  const Eigen::Vector4d y = b.q().coeffs();
  return std::min((x - y).norm(), (x + y).norm());
}

double circle_difference(const OrientedGreatCircle& a, const OrientedGreatCircle& b) {
  return (a.n() - b.n()).norm();
}

double plane_difference(const OrientedGreatCircle& a, const OrientedGreatCircle& b) {
  return std::min((a.n() - b.n()).norm(), (a.n() + b.n()).norm());
}

double point_difference(const SpherePoint& a, const SpherePoint& b) { return (a.v() - b.v()).norm(); }

double axis_difference(const SpherePoint& a, const SpherePoint& b) {
  return std::min((a.v() - b.v()).norm(), (a.v() + b.v()).norm());
}

double incidence(const OrientedGreatCircle& g, const SpherePoint& P) { return std::abs(g.n().dot(P.v())); }

}  // namespace bennett8
