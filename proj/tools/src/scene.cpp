#include "bennett8_cli/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace bennett8::cli {

namespace {

using nlohmann::json;

json vec(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json circle(const std::string& label, const OrientedGreatCircle& c) { return {{"label", label}, {"normal", vec(c.n())}}; }

json line(const std::string& label, const OrientedLine& l) {
  return {{"label", label}, {"direction", vec(l.d())}, {"moment", vec(l.m())}, {"point", vec(l.point())}};
}

class ObjWriter {
 public:
  void polyline(const std::string& label, const std::vector<Vec3>& pts, bool closed) {
    out_ += "o " + label + "\n";
    const size_t first = count_ + 1;
    for (const Vec3& p : pts) vertex(p);
    out_ += "l";
    for (size_t k = 0; k < pts.size(); ++k) out_ += " " + std::to_string(first + k);
    if (closed) out_ += " " + std::to_string(first);
    out_ += "\n";
  }

  void point(const std::string& label, const Vec3& p) {
    out_ += "o " + label + "\n";
    vertex(p);
    out_ += "p " + std::to_string(count_) + "\n";
  }

  void circle(const std::string& label, const Vec3& normal, int segments) {
    const Vec3 n = normal.normalized();
    const Vec3 e1 = n.unitOrthogonal();
    const Vec3 e2 = n.cross(e1);
    std::vector<Vec3> pts;
    for (int k = 0; k < segments; ++k) {
      const double t = 2.0 * std::numbers::pi * k / segments;
      pts.push_back(std::cos(t) * e1 + std::sin(t) * e2);
    }
    polyline(label, pts, true);
  }

  void segment(const std::string& label, const OrientedLine& l, double from, double to, const Vec3& origin) {
    polyline(label, {origin + from * l.d(), origin + to * l.d()}, false);
  }

  std::string str() const { return out_; }

 private:
  void vertex(const Vec3& p) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", p.x(), p.y(), p.z());
    out_ += buf;
    ++count_;
  }

  std::string out_;
  size_t count_ = 0;
};

// Segment of `l` covering the given points' projections plus a margin.
void clipped(ObjWriter& w, const std::string& label, const OrientedLine& l, const std::vector<Vec3>& pts,
             double margin) {
  const Vec3 o = l.point();
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (const Vec3& p : pts) {
    const double s = (p - o).dot(l.d());
    lo = first ? s : std::min(lo, s);
    hi = first ? s : std::max(hi, s);
    first = false;
  }
  w.segment(label, l, lo - margin, hi + margin, o);
}

double spread(const std::vector<Vec3>& pts) {
  Vec3 c = Vec3::Zero();
  for (const Vec3& p : pts) c += p;
  c /= static_cast<double>(pts.size());
  double r = 0.0;
  for (const Vec3& p : pts) r = std::max(r, (p - c).norm());
  return std::max(r, 1.0);
}

}  // namespace

json residual_summary(const Report& report) {
  json out = json::object();
  for (const Residual& r : report.entries) {
    const double w = report.worst(r.family);
    out[r.family] = std::isnan(w) ? json(nullptr) : json(w);
  }
  return out;
}

json scene_json(const EightBarGeometry& geom, const EightBarPose& pose) {
  json j;
  j["kind"] = "spherical8";
  j["phi1"] = pose.phi1;
  j["phi2"] = pose.phi2;
  j["phi3"] = pose.phi3;
  j["collapsed"] = pose.collapsed;
  json bars = json::array();
  for (int b = 0; b < kBarCount; ++b) bars.push_back(circle(bar_label(b), b < 4 ? pose.g[b] : pose.h[b - 4]));
  j["bars"] = bars;
  json joints = json::array();
  for (int k = 0; k < kJointCount; ++k) joints.push_back({{"label", joint_label('R', k)}, {"point", vec(pose.joints[k].v())}});
  j["joints"] = joints;
  Report rep = closure_report(geom, pose);
  if (pose.symmetry) {
    const SphericalSymmetry& s = *pose.symmetry;
    json centers = json::array();
    for (int k = 0; k < 6; ++k) {
      centers.push_back({{"label", "S" + std::to_string(k + 1)}, {"point", vec(s.centers[k].v())}});
    }
    j["symmetry"] = {{"centers", centers},
                     {"n", circle("n", s.n)},
                     {"N", {{"label", "N"}, {"point", vec(s.N.v())}}},
                     {"t1", circle("t1", s.t1)},
                     {"t2", circle("t2", s.t2)}};
    const Report more = halfturn_products_report(pose);
    rep.entries.insert(rep.entries.end(), more.entries.begin(), more.entries.end());
  } else {
    j["symmetry"] = nullptr;
  }
  j["residuals"] = residual_summary(rep);
  return j;
}

json scene_json(const SpatialEightBarGeometry& geom, const SpatialEightBarPose& pose) {
  json j;
  j["kind"] = "spatial8";
  j["phi1"] = pose.phi1;
  j["phi2"] = pose.phi2;
  j["phi3"] = pose.phi3;
  j["collapsed"] = pose.collapsed;
  json bars = json::array();
  for (int b = 0; b < kBarCount; ++b) bars.push_back(line(bar_label(b), b < 4 ? pose.g[b] : pose.h[b - 4]));
  j["bars"] = bars;
  json joints = json::array();
  for (int k = 0; k < kJointCount; ++k) {
    const auto [i, jj] = joint_pair(k);
    json h = line(joint_label('I', k), pose.hinges[k]);
    h["vertex"] = vec(pose.vertex(i, jj));
    joints.push_back(h);
  }
  j["joints"] = joints;
  Report rep = closure_report(geom, pose);
  if (pose.symmetry) {
    const SpatialSymmetry& s = *pose.symmetry;
    json axes = json::array();
    for (int k = 0; k < 6; ++k) axes.push_back(line("s" + std::to_string(k + 1), s.axes[k]));
    j["symmetry"] = {{"axes", axes}, {"n", line("n", s.n)}, {"t", line("t", s.t)}};
    const Report more = symmetry_report_spatial(pose);
    rep.entries.insert(rep.entries.end(), more.entries.begin(), more.entries.end());
  } else {
    j["symmetry"] = nullptr;
  }
  j["residuals"] = residual_summary(rep);
  return j;
}

json scene_json(const SphericalIsogramSpec& spec, const SphericalIsogramPose& pose) {
  json j;
  j["kind"] = "spherical-isogram";
  j["phi1"] = pose.phi1;
  j["phi2"] = pose.phi2;
  j["branch"] = to_string(spec.branch);
  const char* side_labels[] = {"AB", "BC", "DC", "DA"};
  json sides = json::array();
  for (int k = 0; k < 4; ++k) sides.push_back(circle(side_labels[k], pose.sides[k]));
  j["bars"] = sides;
  j["joints"] = json::array({{{"label", "A"}, {"point", vec(pose.A.v())}},
                             {{"label", "B"}, {"point", vec(pose.B.v())}},
                             {{"label", "C"}, {"point", vec(pose.C.v())}},
                             {{"label", "D"}, {"point", vec(pose.D.v())}}});
  try {
    const IsogramSymmetry s = isogram_symmetry_spherical(pose);
    j["symmetry"] = {{"S", vec(s.S.v())}, {"s", circle("s", s.s)}, {"crossed", s.crossed}};
  } catch (const std::exception&) {
    j["symmetry"] = nullptr;
  }
  j["residuals"] = {{"closure", pose.closure_residual}};
  return j;
}

json scene_json(const BennettIsogramSpec& spec, const BennettIsogramPose& pose) {
  json j;
  j["kind"] = "bennett-isogram";
  j["phi1"] = pose.phi1;
  j["phi2"] = pose.phi2;
  j["branch"] = to_string(spec.branch);
  const char* side_labels[] = {"AB", "BC", "DC", "DA"};
  const char* hinge_labels[] = {"A", "B", "C", "D"};
  json sides = json::array(), hinges = json::array();
  for (int k = 0; k < 4; ++k) {
    sides.push_back(line(side_labels[k], pose.sides[k]));
    json h = line(hinge_labels[k], pose.hinges[k]);
    h["vertex"] = vec(pose.vertices[k]);
    hinges.push_back(h);
  }
  j["bars"] = sides;
  j["joints"] = hinges;
  try {
    j["symmetry"] = {{"s", line("s", bennett_symmetry_axis(pose))}};
  } catch (const std::exception&) {
    j["symmetry"] = nullptr;
  }
  j["residuals"] = {{"closure", pose.closure_residual}};
  return j;
}

std::string scene_obj(const EightBarPose& pose, int segments) {
  ObjWriter w;
  for (int b = 0; b < kBarCount; ++b) w.circle(bar_label(b), (b < 4 ? pose.g[b] : pose.h[b - 4]).n(), segments);
  for (int k = 0; k < kJointCount; ++k) w.point(joint_label('R', k), pose.joints[k].v());
  if (pose.symmetry) {
    const SphericalSymmetry& s = *pose.symmetry;
    for (int k = 0; k < 6; ++k) w.point("S" + std::to_string(k + 1), s.centers[k].v());
    w.point("N", s.N.v());
    w.circle("n", s.n.n(), segments);
    w.circle("t1", s.t1.n(), segments);
    w.circle("t2", s.t2.n(), segments);
  }
  return w.str();
}

std::string scene_obj(const SpatialEightBarPose& pose, int /*segments*/) {
  ObjWriter w;
  std::vector<Vec3> all;
  for (int k = 0; k < kJointCount; ++k) {
    const auto [i, j] = joint_pair(k);
    all.push_back(pose.vertex(i, j));
  }
  const double scale = spread(all);
  for (int b = 0; b < kBarCount; ++b) {
    const OrientedLine& l = b < 4 ? pose.g[b] : pose.h[b - 4];
    std::vector<Vec3> pts;
    for (int k = 0; k < kJointCount; ++k) {
      const auto [i, j] = joint_pair(k);
      if ((b < 4 && i == b) || (b >= 4 && j == b - 4)) pts.push_back(pose.vertex(i, j));
    }
    clipped(w, bar_label(b), l, pts, 0.1 * scale);
  }
  for (int k = 0; k < kJointCount; ++k) {
    const auto [i, j] = joint_pair(k);
    const Vec3 v = pose.vertex(i, j);
    w.segment(joint_label('I', k), pose.hinges[k], -0.2 * scale, 0.2 * scale, v);
  }
  if (pose.symmetry) {
    const SpatialSymmetry& s = *pose.symmetry;
    for (int k = 0; k < 6; ++k) clipped(w, "s" + std::to_string(k + 1), s.axes[k], all, 0.0);
    clipped(w, "n", s.n, all, 0.0);
    clipped(w, "t", s.t, all, 0.0);
  }
  return w.str();
}

std::string scene_obj(const SphericalIsogramPose& pose, int segments) {
  ObjWriter w;
  const char* side_labels[] = {"AB", "BC", "DC", "DA"};
  for (int k = 0; k < 4; ++k) w.circle(side_labels[k], pose.sides[k].n(), segments);
  w.point("A", pose.A.v());
  w.point("B", pose.B.v());
  w.point("C", pose.C.v());
  w.point("D", pose.D.v());
  return w.str();
}

std::string scene_obj(const BennettIsogramPose& pose, int /*segments*/) {
  ObjWriter w;
  const char* side_labels[] = {"AB", "BC", "DC", "DA"};
  const char* hinge_labels[] = {"A", "B", "C", "D"};
  const std::vector<Vec3> all(pose.vertices.begin(), pose.vertices.end());
  const double scale = spread(all);
  // Side k joins vertex k and vertex k + 1 (the coupler DC joins D and C).
  const std::array<std::array<int, 2>, 4> ends = {{{0, 1}, {1, 2}, {3, 2}, {3, 0}}};
  for (int k = 0; k < 4; ++k) {
    clipped(w, side_labels[k], pose.sides[k], {pose.vertices[ends[k][0]], pose.vertices[ends[k][1]]}, 0.1 * scale);
  }
  for (int k = 0; k < 4; ++k) w.segment(hinge_labels[k], pose.hinges[k], -0.2 * scale, 0.2 * scale, pose.vertices[k]);
  return w.str();
}

}  // namespace bennett8::cli
