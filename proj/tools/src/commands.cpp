#include "bennett8_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "bennett8/errors.hpp"
#include "bennett8/oracle.hpp"
#include "bennett8_cli/scene.hpp"
#include "bennett8_cli/spec_file.hpp"

namespace bennett8::cli {

namespace {

using nlohmann::json;
constexpr double kPi = std::numbers::pi;
// Small enough to stay on the analytic branch next to the bifurcation at phi1 = 0.
constexpr double kOracleSeedOffset = 1e-3;

void diagnose(std::ostream& err, const std::string& code, const std::string& message, const std::string& constraint) {
  json d = {{"error", code}, {"message", message}};
  if (!constraint.empty()) d["constraint"] = constraint;
  err << d.dump() << '\n';
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidSpec, "cannot write " + path.string(), "output path");
  return f;
}

// Runs `body` and maps failures to exit codes and stderr diagnostics.
template <class Body>
int guarded(std::ostream& err, Body body) {
  try {
    return body();
  } catch (const Error& e) {
    diagnose(err, to_string(e.code()), e.what(), e.constraint());
    return kExitInvalid;
  } catch (const std::exception& e) {
    diagnose(err, "Failure", e.what(), "");
    return kExitInvalid;
  }
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json layout_json(const BarLayout& layout, char prefix, bool spatial) {
  json out = json::object();
  for (int b = 0; b < kBarCount; ++b) {
    json slots = json::array();
    for (const BarSlot& s : layout[b]) {
      json e = {{"joint", joint_label(prefix, s.joint)}, {"angle", s.angle}};
      if (spatial) e["offset"] = s.offset;
      slots.push_back(e);
    }
    out[bar_label(b)] = slots;
  }
  return out;
}

json angular_derived(const EightBarGeometry& g) {
  return {{"alpha", g.alpha},
          {"beta3", g.beta[2]},
          {"branch3", to_string(g.branch[2])},
          {"c21", g.c21},
          {"c32", g.c32},
          {"c31", g.c31}};
}

OrientedGreatCircle isogram_base_circle() { return OrientedGreatCircle(Vec3::UnitZ()); }
SpherePoint isogram_base_point() { return SpherePoint(Vec3::UnitX()); }
OrientedLine isogram_base_line() { return OrientedLine::through(Vec3::Zero(), Vec3::UnitZ()); }
OrientedLine isogram_base_hinge() { return OrientedLine::through(Vec3::Zero(), Vec3::UnitX()); }

// Grid avoiding the aligned poses phi = 0 and phi = pi.
std::vector<double> verify_grid(int n) {
  std::vector<double> out;
  for (int k = 0; k < n; ++k) out.push_back(-kPi + (k + 0.25) * 2.0 * kPi / n);
  return out;
}

class Tally {
 public:
  void record(const std::string& name, double value) {
    auto [it, inserted] = worst_.try_emplace(name, value);
    if (!inserted && (std::isnan(value) || value > it->second)) it->second = value;
    if (inserted) order_.push_back(name);
  }
  void fail(const std::string& name) { record(name, std::numeric_limits<double>::infinity()); }
  void note(const std::string& message) { notes_.push_back(message); }

  json finish(double tol, bool& all_pass) const {
    json checks = json::array();
    all_pass = true;
    for (const std::string& name : order_) {
      const double w = worst_.at(name);
      const bool pass = w <= tol;
      all_pass = all_pass && pass;
      checks.push_back({{"name", name}, {"worst", std::isfinite(w) ? json(w) : json(nullptr)}, {"pass", pass}});
    }
    json out = {{"checks", checks}};
    if (!notes_.empty()) out["notes"] = notes_;
    return out;
  }

 private:
  std::map<std::string, double> worst_;
  std::vector<std::string> order_;
  std::vector<std::string> notes_;
};

void record_report(Tally& t, const Report& rep, const std::vector<std::string>& families) {
  for (const std::string& f : families) {
    const bool present =
        std::any_of(rep.entries.begin(), rep.entries.end(), [&](const Residual& r) { return r.family == f; });
    if (present) t.record(f, rep.worst(f));
  }
}

void record_mobility(Tally& t, const std::vector<MobilitySample>& samples) {
  for (const MobilitySample& m : samples) {
    if (m.status != "ok") {
      t.fail("mobility");
      t.note("mobility at phi1 = " + num(m.phi1) + ": " + m.status);
    } else {
      t.record("mobility", std::abs(m.nullity - 1));
    }
  }
}

template <class Pose>
double oracle_gap(const oracle::LoopProblem& problem, const Pose& pose, int& nullity) {
  oracle::LoopProblem seeded = problem;
  for (size_t k = 1; k < seeded.initial.size(); ++k) seeded.initial[k] += kOracleSeedOffset;
  const oracle::SolveResult r = oracle::solve_loop(seeded);
  nullity = oracle::jacobian_nullity(problem, problem.initial);
  if (!r.converged) return std::numeric_limits<double>::infinity();
  return std::abs(wrap_angle(r.angles[1] - pose.phi2));
}

// ---- validate ----

json validate_document(const SpecDocument& doc) {
  json out = {{"valid", true}};
  if (doc.kind == "spherical8") {
    const EightBarGeometry g = spherical_geometry(doc);
    SpecDocument d = doc;
    d.derive = false;
    d.spec = g.spec;
    out["spec"] = to_json(d);
    json derived = angular_derived(g);
    derived["layout"] = layout_json(g.layout, 'R', false);
    out["derived"] = derived;
  } else if (doc.kind == "spatial8") {
    const SpatialEightBarGeometry g = spatial_geometry(doc);
    SpecDocument d = doc;
    d.derive = false;
    d.spec = g.spec;
    out["spec"] = to_json(d);
    json derived = angular_derived(g.angular);
    derived["a"] = g.a;
    derived["b"] = g.b;
    derived["modulus"] = g.modulus;
    derived["layout"] = layout_json(g.layout, 'I', true);
    out["derived"] = derived;
  } else if (doc.kind == "spherical-isogram") {
    const SphericalIsogramSpec s = spherical_isogram(doc);
    out["spec"] = to_json(doc);
    out["derived"] = {{"c21", transmission_coefficient(s)}};
  } else {
    const BennettIsogramSpec s = bennett_isogram(doc);
    SpecDocument d = doc;
    d.derive = false;
    d.spec = BennettIsogramInput{s.alpha_twist, s.beta_twist, s.a_len, s.b_len, s.branch};
    out["spec"] = to_json(d);
    const Dual c = bennett_dual_coefficient(s);
    out["derived"] = {{"c21", c.re}, {"c21_dual_part", c.du}, {"modulus", s.a_len / std::sin(s.alpha_twist)}};
  }
  return out;
}

// ---- sweep ----

std::string csv_status(const std::string& error) {
  if (error.empty()) return "ok";
  std::string s = error.substr(0, error.find(':'));
  return s;
}

void sweep_spherical8(const EightBarGeometry& g, const std::vector<double>& phis, unsigned threads, std::ostream& csv) {
  const auto samples = sweep(g, phis, threads);
  const auto families = sweep_families(false);
  csv << "phi1,phi2,phi3";
  for (int k = 0; k < kJointCount; ++k) {
    const std::string l = joint_label('R', k);
    csv << ',' << l << "_x," << l << "_y," << l << "_z";
  }
  for (const auto& f : families) csv << ",max_" << f;
  csv << ",status\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& s : samples) {
    csv << num(s.phi1);
    csv << ',' << num(s.pose ? s.pose->phi2 : nan) << ',' << num(s.pose ? s.pose->phi3 : nan);
    for (int k = 0; k < kJointCount; ++k) {
      const Vec3 p = s.pose ? s.pose->joints[k].v() : Vec3::Constant(nan);
      csv << ',' << num(p.x()) << ',' << num(p.y()) << ',' << num(p.z());
    }
    for (double v : s.family_max) csv << ',' << num(v);
    csv << ',' << csv_status(s.error) << '\n';
  }
}

void sweep_spatial8(const SpatialEightBarGeometry& g, const std::vector<double>& phis, unsigned threads,
                    std::ostream& csv) {
  const auto samples = sweep(g, phis, threads);
  const auto families = sweep_families(true);
  csv << "phi1,phi2,phi3";
  for (int k = 0; k < kJointCount; ++k) {
    const std::string l = joint_label('I', k);
    for (const char* c : {"_x", "_y", "_z", "_dx", "_dy", "_dz"}) csv << ',' << l << c;
  }
  for (const auto& f : families) csv << ",max_" << f;
  csv << ",status\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& s : samples) {
    csv << num(s.phi1);
    csv << ',' << num(s.pose ? s.pose->phi2 : nan) << ',' << num(s.pose ? s.pose->phi3 : nan);
    for (int k = 0; k < kJointCount; ++k) {
      const auto [i, j] = joint_pair(k);
      const Vec3 p = s.pose ? s.pose->vertex(i, j) : Vec3::Constant(nan);
      const Vec3 d = s.pose ? s.pose->hinges[k].d() : Vec3::Constant(nan);
      csv << ',' << num(p.x()) << ',' << num(p.y()) << ',' << num(p.z()) << ',' << num(d.x()) << ',' << num(d.y())
          << ',' << num(d.z());
    }
    for (double v : s.family_max) csv << ',' << num(v);
    csv << ',' << csv_status(s.error) << '\n';
  }
}

template <class Solve, class Points>
void sweep_isogram(const std::vector<double>& phis, Solve solve, Points points, std::ostream& csv) {
  csv << "phi1,phi2";
  for (const char* v : {"A", "B", "C", "D"}) csv << ',' << v << "_x," << v << "_y," << v << "_z";
  csv << ",max_closure,status\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (double phi : phis) {
    csv << num(phi);
    try {
      const auto pose = solve(phi);
      csv << ',' << num(pose.phi2);
      for (const Vec3& p : points(pose)) csv << ',' << num(p.x()) << ',' << num(p.y()) << ',' << num(p.z());
      csv << ',' << num(pose.closure_residual) << ",ok\n";
    } catch (const Error& e) {
      csv << ',' << num(nan);
      for (int k = 0; k < 12; ++k) csv << ',' << num(nan);
      csv << ',' << num(nan) << ',' << to_string(e.code()) << '\n';
    }
  }
}

// ---- verify ----

json verify_spherical8(const EightBarGeometry& g, const std::vector<double>& grid, double tol, bool& pass) {
  Tally t;
  const auto families = sweep_families(false);
  for (double phi : grid) {
    try {
      const EightBarPose pose = assemble_spherical(g, phi);
      record_report(t, closure_report(g, pose), families);
      record_report(t, halfturn_products_report(pose), families);
    } catch (const Error& e) {
      t.fail("assembly");
      t.note("phi1 = " + num(phi) + ": " + e.what());
    }
  }
  record_mobility(t, mobility_check(g, grid));
  return t.finish(tol, pass);
}

json verify_spatial8(const SpatialEightBarGeometry& g, const std::vector<double>& grid, double tol, bool& pass) {
  Tally t;
  const auto families = sweep_families(true);
  for (double phi : grid) {
    try {
      const SpatialEightBarPose pose = assemble_spatial(g, phi);
      record_report(t, closure_report(g, pose), families);
      record_report(t, symmetry_report_spatial(pose), families);
      const EightBarPose image = assemble_spherical(g.angular, phi);
      double worst = 0.0;
      for (int b = 0; b < 4; ++b) {
        worst = std::max(worst, plane_difference(OrientedGreatCircle(pose.g[b].d()), image.g[b]));
        worst = std::max(worst, plane_difference(OrientedGreatCircle(pose.h[b].d()), image.h[b]));
      }
      for (int k = 0; k < kJointCount; ++k) {
        worst = std::max(worst, axis_difference(SpherePoint(pose.hinges[k].d()), image.joints[k]));
      }
      t.record("spherical_image", worst);
    } catch (const Error& e) {
      t.fail("assembly");
      t.note("phi1 = " + num(phi) + ": " + e.what());
    }
  }
  record_mobility(t, mobility_check(g, grid));
  return t.finish(tol, pass);
}

json verify_spherical_isogram(const SphericalIsogramSpec& s, const std::vector<double>& grid, double tol, bool& pass) {
  Tally t;
  for (double phi : grid) {
    try {
      const SphericalIsogramPose pose = solve_spherical_isogram(s, isogram_base_circle(), isogram_base_point(), phi);
      t.record("closure", pose.closure_residual);
      int nullity = -1;
      t.record("transmission_vs_oracle", oracle_gap(spherical_isogram_loop(s, pose), pose, nullity));
      t.record("mobility", std::abs(nullity - 1));
      const IsogramSymmetry sym = isogram_symmetry_spherical(pose);
      auto map = [&](const SpherePoint& p) {
        return sym.crossed ? reflect_in_circle(sym.s, p) : apply(half_turn(sym.S), p);
      };
      t.record("cell_symmetry", std::max(point_difference(map(pose.A), pose.C), point_difference(map(pose.B), pose.D)));
    } catch (const Error& e) {
      t.fail("assembly");
      t.note("phi1 = " + num(phi) + ": " + e.what());
    }
  }
  return t.finish(tol, pass);
}

json verify_bennett_isogram(const BennettIsogramSpec& s, const std::vector<double>& grid, double tol, bool& pass) {
  Tally t;
  t.record("dual_coefficient", std::abs(bennett_dual_coefficient(s).du));
  for (double phi : grid) {
    try {
      const BennettIsogramPose pose = solve_bennett_isogram(s, isogram_base_line(), isogram_base_hinge(), phi);
      t.record("closure", pose.closure_residual);
      int nullity = -1;
      t.record("transmission_vs_oracle", oracle_gap(bennett_isogram_loop(s, pose), pose, nullity));
      t.record("mobility", std::abs(nullity - 1));
      const Displacement r = line_reflection(bennett_symmetry_axis(pose));
      t.record("cell_symmetry", std::max(line_set_difference(apply(r, pose.hinges[0]), pose.hinges[2]),
                                         line_set_difference(apply(r, pose.hinges[1]), pose.hinges[3])));
    } catch (const Error& e) {
      t.fail("assembly");
      t.note("phi1 = " + num(phi) + ": " + e.what());
    }
  }
  return t.finish(tol, pass);
}

}  // namespace

int run_validate(const std::filesystem::path& spec, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    out << validate_document(load_spec_file(spec)).dump(2) << '\n';
    return kExitOk;
  });
}

int run_derive(const std::filesystem::path& spec, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    out << to_json(derive_document(load_spec_file(spec))).dump(2) << '\n';
    return kExitOk;
  });
}

int run_pose(const std::filesystem::path& spec, const PoseOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opt.segments < 3) throw Error(ErrorCode::InvalidSpec, "--segments must be at least 3", "segments >= 3");
    const SpecDocument doc = load_spec_file(spec);
    json scene;
    std::string obj;
    if (doc.kind == "spherical8") {
      const EightBarGeometry g = spherical_geometry(doc);
      const EightBarPose pose = assemble_spherical(g, opt.phi);
      scene = scene_json(g, pose);
      if (opt.obj) obj = scene_obj(pose, opt.segments);
    } else if (doc.kind == "spatial8") {
      const SpatialEightBarGeometry g = spatial_geometry(doc);
      const SpatialEightBarPose pose = assemble_spatial(g, opt.phi);
      scene = scene_json(g, pose);
      if (opt.obj) obj = scene_obj(pose, opt.segments);
    } else if (doc.kind == "spherical-isogram") {
      const SphericalIsogramSpec s = spherical_isogram(doc);
      const auto pose = solve_spherical_isogram(s, isogram_base_circle(), isogram_base_point(), opt.phi);
      scene = scene_json(s, pose);
      if (opt.obj) obj = scene_obj(pose, opt.segments);
    } else {
      const BennettIsogramSpec s = bennett_isogram(doc);
      const auto pose = solve_bennett_isogram(s, isogram_base_line(), isogram_base_hinge(), opt.phi);
      scene = scene_json(s, pose);
      if (opt.obj) obj = scene_obj(pose, opt.segments);
    }
    if (opt.obj) open_output(*opt.obj) << obj;
    if (opt.out) {
      open_output(*opt.out) << scene.dump(2) << '\n';
      out << json{{"phi1", scene["phi1"]}, {"residuals", scene["residuals"]}}.dump(2) << '\n';
    } else {
      out << scene.dump(2) << '\n';
    }
    return kExitOk;
  });
}

int run_sweep(const std::filesystem::path& spec, const SweepOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opt.samples < 2) throw Error(ErrorCode::InvalidSpec, "--samples must be at least 2", "samples >= 2");
    const SpecDocument doc = load_spec_file(spec);
    const std::vector<double> phis = sweep_angles(
        opt.from, opt.to, opt.samples, opt.uniform_angle ? SweepSpacing::UniformAngle : SweepSpacing::HalfAngleTangent);
    std::ofstream file;
    if (opt.out) file = open_output(*opt.out);
    std::ostream& csv = opt.out ? static_cast<std::ostream&>(file) : out;
    if (doc.kind == "spherical8") {
      sweep_spherical8(spherical_geometry(doc), phis, opt.threads, csv);
    } else if (doc.kind == "spatial8") {
      sweep_spatial8(spatial_geometry(doc), phis, opt.threads, csv);
    } else if (doc.kind == "spherical-isogram") {
      const SphericalIsogramSpec s = spherical_isogram(doc);
      sweep_isogram(
          phis, [&](double phi) { return solve_spherical_isogram(s, isogram_base_circle(), isogram_base_point(), phi); },
          [](const SphericalIsogramPose& p) { return std::vector<Vec3>{p.A.v(), p.B.v(), p.C.v(), p.D.v()}; }, csv);
    } else {
      const BennettIsogramSpec s = bennett_isogram(doc);
      sweep_isogram(
          phis, [&](double phi) { return solve_bennett_isogram(s, isogram_base_line(), isogram_base_hinge(), phi); },
          [](const BennettIsogramPose& p) { return std::vector<Vec3>(p.vertices.begin(), p.vertices.end()); }, csv);
    }
    if (opt.out) out << json{{"samples", opt.samples}, {"out", opt.out->string()}}.dump() << '\n';
    return kExitOk;
  });
}

int run_verify(const std::filesystem::path& spec, const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opt.grid < 1) throw Error(ErrorCode::InvalidSpec, "--phi-grid must be positive", "phi-grid >= 1");
    if (!(opt.tol > 0.0)) throw Error(ErrorCode::InvalidSpec, "--tol must be positive", "tol > 0");
    const SpecDocument doc = load_spec_file(spec);
    const std::vector<double> grid = verify_grid(opt.grid);
    bool pass = false;
    json result;
    if (doc.kind == "spherical8") {
      result = verify_spherical8(spherical_geometry(doc), grid, opt.tol, pass);
    } else if (doc.kind == "spatial8") {
      result = verify_spatial8(spatial_geometry(doc), grid, opt.tol, pass);
    } else if (doc.kind == "spherical-isogram") {
      result = verify_spherical_isogram(spherical_isogram(doc), grid, opt.tol, pass);
    } else {
      result = verify_bennett_isogram(bennett_isogram(doc), grid, opt.tol, pass);
    }
    result["kind"] = doc.kind;
    result["grid"] = opt.grid;
    result["tol"] = opt.tol;
    result["pass"] = pass;
    out << result.dump(2) << '\n';
    if (!pass) {
      diagnose(err, "VerificationFailure", "at least one check exceeded the tolerance", "");
      return kExitVerifyFailed;
    }
    return kExitOk;
  });
}

}  // namespace bennett8::cli
