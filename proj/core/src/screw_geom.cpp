#include "bennett8/screw_geom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bennett8/errors.hpp"

namespace bennett8 {

namespace {

using Quat = Eigen::Quaterniond;

Quat pure(const Vec3& v) { return Quat(0.0, v.x(), v.y(), v.z()); }

Quat add(const Quat& a, const Quat& b) {
  Quat r;
  r.coeffs() = a.coeffs() + b.coeffs();
  return r;
}

Quat scale(const Quat& a, double s) {
  Quat r;
  r.coeffs() = s * a.coeffs();
  return r;
}

}  // namespace

OrientedLine::OrientedLine(const Vec3& d, const Vec3& m) {
  const double n = d.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("line direction must be nonzero");
  d_ = d / n;
  m_ = m / n;
  m_ -= d_ * d_.dot(m_);
}

OrientedLine OrientedLine::through(const Vec3& point, const Vec3& direction) {
  const Vec3 d = direction.normalized();
  return {d, point.cross(d)};
}

Displacement Displacement::screw(const OrientedLine& axis, double angle, double translation) {
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  const Vec3& d = axis.d();
  const Vec3& m = axis.m();
  const Quat real(c, s * d.x(), s * d.y(), s * d.z());
  const Vec3 dv = 0.5 * translation * c * d + s * m;
  const Quat dual(-0.5 * translation * s, dv.x(), dv.y(), dv.z());
  return {real, dual};
}

CommonPerpendicular common_perpendicular(const OrientedLine& l1, const OrientedLine& l2) {
  const Vec3 c = l1.d().cross(l2.d());
  const double cn = c.norm();
  if (cn < kParallelTol) throw Error(ErrorCode::ParallelLines, "lines are parallel");
  const Vec3 p1 = l1.point();
  const Vec3 p2 = l2.point();
  const Vec3 w0 = p1 - p2;
  const double b = l1.d().dot(l2.d());
  const double dd = l1.d().dot(w0);
  const double e = l2.d().dot(w0);
  const double denom = 1.0 - b * b;
  const double s = (b * e - dd) / denom;
  const double t = (e - b * dd) / denom;
  CommonPerpendicular out;
  out.foot1 = p1 + s * l1.d();
  out.foot2 = p2 + t * l2.d();
  out.axis = OrientedLine::through(out.foot1, c / cn);
  out.distance = (out.foot2 - out.foot1).norm();
  out.angle = std::atan2(cn, b);
  return out;
}

Displacement line_reflection(const OrientedLine& axis) { return {pure(axis.d()), pure(axis.m())}; }

Displacement compose(const Displacement& D2, const Displacement& D1) {
  return {D2.real() * D1.real(), add(D2.real() * D1.dual(), D2.dual() * D1.real())};
}

Displacement inverse(const Displacement& D) { return {D.real().conjugate(), D.dual().conjugate()}; }

Vec3 apply(const Displacement& D, const Vec3& point) {
  const Vec3 rotated = D.real() * point;
  const Vec3 translation = 2.0 * (D.dual() * D.real().conjugate()).vec();
  return rotated + translation;
}

OrientedLine apply(const Displacement& D, const OrientedLine& line) {
  const Quat& r = D.real();
  const Quat& e = D.dual();
  const Quat d = pure(line.d());
  const Quat m = pure(line.m());
  const Quat real = r * d * r.conjugate();
  const Quat dual = add(add(r * m * r.conjugate(), r * d * e.conjugate()), e * d * r.conjugate());
  return {real.vec(), dual.vec()};
}

ScrewParams screw_axis(const Displacement& D) {
  Quat r = D.real();
  Quat e = D.dual();
  const double norm = r.norm();
  r = scale(r, 1.0 / norm);
  e = scale(e, 1.0 / norm);
  if (r.w() < 0.0) {
    r = scale(r, -1.0);
    e = scale(e, -1.0);
  }
  const double s = r.vec().norm();
  const double angle = 2.0 * std::atan2(s, r.w());
  if (angle < kTranslationTol) {
    throw Error(ErrorCode::NoFiniteAxis, "identity or pure translation has no finite screw axis");
  }
  Vec3 d = r.vec() / s;
  double t = -2.0 * e.w() / s;
  Vec3 m = (e.vec() - 0.5 * t * r.w() * d) / s;
  if (std::abs(r.w()) < 1e-12 && tie_break(d).dot(d) < 0.0) {
    // A half-turn reads the same about either axis orientation.
    d = -d;
    m = -m;
    t = -t;
  }
  return {OrientedLine(d, m), angle, t};
}

DualAngle dual_angle(const OrientedLine& l1, const OrientedLine& l2) {
  const CommonPerpendicular cp = common_perpendicular(l1, l2);
  return {cp.angle, cp.distance};
}

OrientedLine midline_symmetry_axis(const OrientedLine& h1, const OrientedLine& h3rev) {
  if (h1.d().cross(h3rev.d()).norm() < kParallelTol) {
    throw Error(ErrorCode::ParallelLines, "lines are parallel");
  }
  // Dual normalization of the sum of the two dual unit vectors.
  const Vec3 v = h1.d() + h3rev.d();
  const Vec3 w = h1.m() + h3rev.m();
  const double n = v.norm();
  return {v / n, w / n - v * (v.dot(w) / (n * n * n))};
}

Vec3 closest_point(const OrientedLine& on, const OrientedLine& other) {
  if (on.d().cross(other.d()).norm() < kParallelTol) {
    const Vec3 q = other.point();
    const Vec3 p = on.point();
    return p + on.d() * on.d().dot(q - p);
  }
  return common_perpendicular(on, other).foot1;
}

DualAngle signed_dual_arc(const OrientedLine& along, const OrientedLine& from, const OrientedLine& to) {
  const double angle = std::atan2(from.d().cross(to.d()).dot(along.d()), from.d().dot(to.d()));
  const double offset = (closest_point(along, to) - closest_point(along, from)).dot(along.d());
  return {angle, offset};
}

double line_difference(const OrientedLine& a, const OrientedLine& b) {
  return (a.d() - b.d()).norm() + (a.m() - b.m()).norm();
}

double line_set_difference(const OrientedLine& a, const OrientedLine& b) {
  return std::min(line_difference(a, b), line_difference(a, b.reversed()));
}

double displacement_distance(const Displacement& a, const Displacement& b) {
  Eigen::Matrix<double, 8, 1> x;
  Eigen::Matrix<double, 8, 1> y;
  x << a.real().coeffs(), a.dual().coeffs();
  y << b.real().coeffs(), b.dual().coeffs();
  return std::min((x - y).norm(), (x + y).norm());
}

double point_line_distance(const Vec3& p, const OrientedLine& l) { return (p.cross(l.d()) - l.m()).norm(); }

double orthogonal_meet_residual(const OrientedLine& a, const OrientedLine& b) {
  const Vec3 c = a.d().cross(b.d());
  const double cn = c.norm();
  double distance = 0.0;
  if (cn < kParallelTol) {
    distance = point_line_distance(b.point(), a);
  } else {
    distance = std::abs(a.d().dot(b.m()) + b.d().dot(a.m())) / cn;
  }
  return distance + std::abs(a.d().dot(b.d()));
}

double study_residual(const Displacement& D) {
  return std::abs(D.real().norm() - 1.0) + std::abs(D.real().coeffs().dot(D.dual().coeffs()));
}

}  // namespace bennett8
