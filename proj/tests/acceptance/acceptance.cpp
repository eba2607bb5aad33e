// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance [--criterion N] [--cli PATH] [--spec-dir DIR]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bennett8/errors.hpp"
#include "bennett8/isogram.hpp"
#include "bennett8/linkage.hpp"
#include "bennett8/oracle.hpp"
#include "generators.hpp"

namespace {

using namespace bennett8;
using bennett8::testing::Gen;
using bennett8::testing::kPi;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Worst {
  double value = 0.0;
  std::string where;
  void take(double v, const std::string& at) {
    if (!(v <= value)) {  // NaN counts as worst
      value = v;
      where = at;
    }
  }
  std::string str() const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", value);
    return where.empty() ? std::string(buf) : std::string(buf) + " (" + where + ")";
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double angle_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(wrap_angle(a[i] - b[i])));
  return worst;
}

// The driving grid used throughout: offset by a quarter step so that the
// aligned poses 0 and pi are never sampled.
std::vector<double> grid(int n) {
  std::vector<double> out;
  for (int k = 0; k < n; ++k) out.push_back(-kPi + (k + 0.25) * 2.0 * kPi / n);
  return out;
}

std::string where(int spec, double phi) { return "spec " + std::to_string(spec) + ", phi " + fmt(phi); }

// 1: analytic coupled angle against Newton closure of the bare loop.
Outcome transmission_vs_oracle() {
  const OrientedGreatCircle g0(Vec3::UnitZ());
  const SpherePoint P(Vec3::UnitX());
  Gen gen(1001);
  Worst gap;
  int failures = 0;
  const auto start = std::chrono::steady_clock::now();
  for (int s = 0; s < 100; ++s) {
    const SphericalIsogramSpec spec = gen.isogram_spec();
    for (int k = 0; k < 20; ++k) {
      const double phi1 = gen.regular_angle();
      const SphericalIsogramPose pose = solve_spherical_isogram(spec, g0, P, phi1);
      oracle::LoopProblem problem = spherical_isogram_loop(spec, pose);
      const std::vector<double> analytic = problem.initial;
      for (std::size_t j = 1; j < problem.initial.size(); ++j) problem.initial[j] += 0.05;
      const oracle::SolveResult r = oracle::solve_loop(problem);
      if (!r.converged) ++failures;
      gap.take(r.converged ? angle_gap(r.angles, analytic) : INFINITY, where(s, phi1));
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {gap.value < 1e-8 && failures == 0 && seconds < 10.0,
          "2000 poses, worst gap " + gap.str() + ", unconverged " + std::to_string(failures) + ", " +
              fmt(seconds) + " s"};
}

// 2: symmetry centers of oriented circle pairs.
Outcome symmetry_centers_property() {
  Gen gen(1002);
  Worst map, perp;
  for (int i = 0; i < 1000; ++i) {
    const auto [g1, g2] = gen.circle_pair();
    const SymmetryCenters c = symmetry_centers(g1, g2);
    map.take(circle_difference(apply(half_turn(c.S), g1), g2), "pair " + std::to_string(i));
    perp.take(incidence(common_perpendicular_circle(g1, g2), c.S), "pair " + std::to_string(i));
  }
  return {map.value < 1e-10 && perp.value < 1e-10, "half-turn " + map.str() + ", perpendicular " + perp.str()};
}

struct SphericalRun {
  Worst incidence, centers, rotation, bisector, products;
  int errors = 0;
  std::string first_error;
};

SphericalRun run_spherical() {
  Gen gen(1003);
  SphericalRun run;
  for (int s = 0; s < 20; ++s) {
    const EightBarGeometry g = gen.eight_bar();
    for (double phi : grid(25)) {
      try {
        const EightBarPose pose = assemble_spherical(g, phi);
        const Report closure = closure_report(g, pose);
        const Report rep = halfturn_products_report(pose);
        double incid = 0.0;
        for (int i = 0; i < 4; ++i) {
          for (int j = 0; j < 4; ++j) {
            if (i == j) continue;
            incid = std::max({incid, bennett8::incidence(pose.g[i], pose.R(i, j)),
                              bennett8::incidence(pose.h[j], pose.R(i, j))});
          }
        }
        double coplanar = 0.0;
        for (const SpherePoint& S : pose.symmetry->centers) {
          coplanar = std::max(coplanar, bennett8::incidence(pose.symmetry->n, S));
        }
        run.incidence.take(std::max(incid, closure.worst("closure")), where(s, phi));
        run.centers.take(coplanar, where(s, phi));
        run.rotation.take(rep.worst("rotation_table"), where(s, phi));
        run.bisector.take(rep.worst("bisector_symmetry"), where(s, phi));
        run.products.take(rep.worst("products"), where(s, phi));
      } catch (const Error& e) {
        if (run.errors++ == 0) run.first_error = where(s, phi) + ": " + e.what();
      }
    }
  }
  return run;
}

const SphericalRun& spherical_run() {
  static const SphericalRun run = run_spherical();
  return run;
}

// 3: incidences, coplanar centers, rotation table and bisector symmetry.
Outcome spherical_theorem() {
  const SphericalRun& r = spherical_run();
  const bool pass = r.errors == 0 && r.incidence.value < 1e-9 && r.centers.value < 1e-9 && r.rotation.value < 1e-9 &&
                    r.bisector.value < 1e-9;
  std::string detail = "500 poses, incidence " + r.incidence.str() + ", centers " + r.centers.str() +
                       ", rotation table " + r.rotation.str() + ", bisector " + r.bisector.str();
  if (r.errors) detail += ", errors " + std::to_string(r.errors) + " first: " + r.first_error;
  return {pass, detail};
}

// 4: half-turn product identities and the involutive triple product.
Outcome operator_identities() {
  const SphericalRun& r = spherical_run();
  std::string detail = "500 poses, worst product residual " + r.products.str();
  if (r.errors) detail += ", errors " + std::to_string(r.errors);
  return {r.errors == 0 && r.products.value < 1e-9, detail};
}

// 5: spatial compound of six Bennett cells.
Outcome spatial_theorem() {
  Gen gen(1005);
  Worst cells, perp, screw, axis, cohorts, other;
  int errors = 0;
  std::string first_error;
  for (int s = 0; s < 10; ++s) {
    const SpatialEightBarGeometry g = gen.spatial_eight_bar();
    for (double phi : grid(25)) {
      try {
        const SpatialEightBarPose pose = assemble_spatial(g, phi);
        const Report closure = closure_report(g, pose);
        const Report rep = symmetry_report_spatial(pose);
        cells.take(closure.worst(), where(s, phi));
        perp.take(rep.worst("common_perpendicular"), where(s, phi));
        screw.take(rep.worst("rotation_table"), where(s, phi));
        axis.take(rep.worst("axis_symmetry"), where(s, phi));
        cohorts.take(rep.worst("cohorts"), where(s, phi));
        other.take(std::max(rep.worst("alignment"), rep.worst("products")), where(s, phi));
      } catch (const Error& e) {
        if (errors++ == 0) first_error = where(s, phi) + ": " + e.what();
      }
    }
  }
  const bool pass = errors == 0 && cells.value < 1e-9 && perp.value < 1e-9 && screw.value < 1e-9 &&
                    axis.value < 1e-9 && cohorts.value < 1e-9 && other.value < 1e-9;
  std::string detail = "250 poses, cells " + cells.str() + ", perpendicular " + perp.str() + ", screw " +
                       screw.str() + ", reflection " + axis.str() + ", cohorts " + cohorts.str() +
                       ", alignment/products " + other.str();
  if (errors) detail += ", errors " + std::to_string(errors) + " first: " + first_error;
  return {pass, detail};
}

double signed_turn(const Vec3& from, const Vec3& to, const Vec3& axis) {
  return std::atan2(from.cross(to).dot(axis), from.dot(to));
}

// Spherical 4R through four generic joint axes, at the pose it was built in.
int generic_spherical_4r_nullity(Gen& gen) {
  std::vector<Vec3> axes = {gen.unit_vector(), gen.unit_vector(), gen.unit_vector(), gen.unit_vector()};
  std::vector<Vec3> links(4);
  for (int k = 0; k < 4; ++k) links[k] = axes[k].cross(axes[(k + 1) % 4]).normalized();
  oracle::LoopProblem p;
  std::vector<double> angles;
  for (int k = 0; k < 4; ++k) {
    p.twists.push_back(signed_turn(axes[k], axes[(k + 1) % 4], links[k]));
    angles.push_back(signed_turn(links[(k + 3) % 4], links[k], axes[k]));
  }
  return oracle::jacobian_nullity(p, angles);
}

// Spatial 4R with hinges normal to the sides of a generic skew quadrilateral.
int generic_spatial_4r_nullity(Gen& gen) {
  std::vector<Vec3> corners = {gen.vector(2), gen.vector(2), gen.vector(2), gen.vector(2)};
  std::vector<Vec3> sides(4), axes(4);
  for (int k = 0; k < 4; ++k) sides[k] = corners[(k + 1) % 4] - corners[k];
  for (int k = 0; k < 4; ++k) axes[k] = sides[(k + 3) % 4].cross(sides[k]).normalized();
  oracle::LoopProblem p;
  std::vector<double> angles;
  for (int k = 0; k < 4; ++k) {
    p.twists.push_back(signed_turn(axes[k], axes[(k + 1) % 4], sides[k].normalized()));
    p.offsets.push_back(sides[k].norm());
    angles.push_back(signed_turn(sides[(k + 3) % 4].normalized(), sides[k].normalized(), axes[k]));
  }
  return oracle::jacobian_nullity(p, angles);
}

// 6: Jacobian nullity of the closure constraints.
Outcome mobility() {
  Gen gen(1006);
  std::vector<double> phis;
  for (int k = 0; k < 10; ++k) phis.push_back(gen.regular_angle());

  std::vector<int> bennett;
  const BennettIsogramSpec spec = gen.bennett_spec();
  for (double phi : phis) {
    const BennettIsogramPose pose =
        solve_bennett_isogram(spec, OrientedLine::through(Vec3::Zero(), Vec3::UnitX()),
                              OrientedLine::through(Vec3::Zero(), Vec3::UnitZ()), phi);
    bennett.push_back(oracle::jacobian_nullity(bennett_isogram_loop(spec, pose), isogram_joint_angles(pose)));
  }
  auto nullities = [](const std::vector<MobilitySample>& samples, bool& ok) {
    std::vector<int> out;
    for (const MobilitySample& m : samples) {
      out.push_back(m.nullity);
      ok = ok && m.status == "ok";
    }
    return out;
  };
  bool ok = true;
  const SpatialEightBarGeometry sg = gen.spatial_eight_bar();
  const std::vector<int> spherical8 = nullities(mobility_check(sg.angular, phis), ok);
  const std::vector<int> spatial8 = nullities(mobility_check(sg, phis), ok);
  const int control = generic_spherical_4r_nullity(gen);
  const int spatial_control = generic_spatial_4r_nullity(gen);

  auto all_one = [](const std::vector<int>& v) { return std::all_of(v.begin(), v.end(), [](int n) { return n == 1; }); };
  auto list = [](const std::vector<int>& v) {
    std::string s;
    for (int n : v) s += std::to_string(n);
    return s;
  };
  const bool mobile = ok && all_one(bennett) && all_one(spherical8) && all_one(spatial8);
  const bool rigid = control == 0;
  return {mobile && rigid, "bennett " + list(bennett) + ", spherical 8-bar " + list(spherical8) +
                               ", spatial 8-bar " + list(spatial8) + ", generic spherical 4R control " +
                               std::to_string(control) + " (want 0), generic spatial 4R " +
                               std::to_string(spatial_control)};
}

// 7: vanishing dual coefficient part iff the offset proportion holds.
Outcome bennett_equivalence() {
  Gen gen(1007);
  int mismatches = 0, slope_failures = 0, on = 0;
  double worst_slope = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const SphericalIsogramSpec s = gen.isogram_spec();
    const double a = gen.uniform(0.2, 3.0);
    const double b_prop = bennett_offset(s.alpha, s.beta, a, s.branch);
    BennettIsogramSpec spec{s.alpha, s.beta, a, b_prop, s.branch};
    if (gen.coin()) {
      spec.b_len = b_prop * (1.0 + (gen.coin() ? 1 : -1) * std::pow(10.0, gen.uniform(-6.0, 0.0)));
    } else {
      ++on;
    }
    const bool dual_zero = std::abs(bennett_dual_coefficient(spec).du) < 1e-12;
    const bool proportion = bennett_proportion_residual(spec) < 1e-12;
    if (dual_zero != proportion) ++mismatches;

    BennettIsogramSpec pert{s.alpha, s.beta, a, b_prop + 1e-3, s.branch};
    const double full = bennett_dual_coefficient(pert).du;
    pert.b_len = b_prop + 0.5e-3;
    const double half = bennett_dual_coefficient(pert).du;
    const double slope_err = std::abs(full / half - 2.0);
    worst_slope = std::max(worst_slope, slope_err);
    if (!(slope_err < 1e-6)) ++slope_failures;
  }
  return {mismatches == 0 && slope_failures == 0,
          "1000 specs (" + std::to_string(on) + " on the proportion), mismatches " + std::to_string(mismatches) +
              ", slope ratio error " + fmt(worst_slope)};
}

// 8: aligned poses at phi1 = 0.
Outcome collapse() {
  Gen gen(1008);
  Worst sph, spa;
  bool flagged = true;
  for (int s = 0; s < 20; ++s) {
    const SpatialEightBarGeometry g = gen.spatial_eight_bar();
    const EightBarPose p = assemble_spherical(g.angular, 0.0);
    const SpatialEightBarPose q = assemble_spatial(g, 0.0);
    flagged = flagged && p.collapsed && q.collapsed && !p.symmetry && !q.symmetry;
    double a = 0.0, b = 0.0;
    for (int i = 0; i < 4; ++i) {
      a = std::max({a, plane_difference(p.g[i], p.g[0]), plane_difference(p.h[i], p.g[0])});
      b = std::max({b, line_set_difference(q.g[i], q.g[0]), line_set_difference(q.h[i], q.g[0])});
    }
    for (const SpherePoint& R : p.joints) a = std::max(a, incidence(p.g[0], R));
    for (int idx = 0; idx < kJointCount; ++idx) {
      const auto [i, j] = joint_pair(idx);
      b = std::max(b, point_line_distance(q.vertex(i, j), q.g[0]));
    }
    sph.take(a, "spec " + std::to_string(s));
    spa.take(b, "spec " + std::to_string(s));
  }
  return {flagged && sph.value < 1e-10 && spa.value < 1e-10,
          "20 specs, spherical spread " + sph.str() + ", spatial spread " + spa.str() +
              (flagged ? "" : ", symmetry not flagged absent")};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// 9: byte-identical sweep output across runs.
Outcome determinism(const std::string& cli, const fs::path& spec_dir) {
  if (cli.empty()) return {false, "no --cli given"};
  const fs::path dir = fs::temp_directory_path() / "bennett8_acceptance_sweep";
  fs::create_directories(dir);
  std::string detail;
  bool pass = true;
  for (const char* name : {"spherical8_figure.json", "spatial8_figure.json"}) {
    std::string files[2];
    for (int run = 0; run < 2; ++run) {
      const fs::path out = dir / (std::string(name) + "." + std::to_string(run) + ".csv");
      const std::string cmd = "\"" + cli + "\" sweep \"" + (spec_dir / name).string() +
                              "\" --from -3.1 --to 3.1 --samples 257 --out \"" + out.string() + "\" > /dev/null";
      if (std::system(cmd.c_str()) != 0) {
        pass = false;
        detail += std::string(name) + ": sweep failed; ";
      }
      files[run] = slurp(out);
    }
    const bool same = !files[0].empty() && files[0] == files[1];
    pass = pass && same;
    detail += std::string(name) + ": " + std::to_string(files[0].size()) + " bytes " +
              (same ? "identical" : "DIFFERENT") + "; ";
  }
  fs::remove_all(dir);
  return {pass, detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  std::string cli;
  std::string spec_dir = "specs";
  app.add_option("--criterion", only, "Run a single criterion (1-9)")->check(CLI::Range(1, 9));
  app.add_option("--cli", cli, "Path to the command-line tool");
  app.add_option("--spec-dir", spec_dir, "Directory of bundled specs");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Outcome()>> criteria = {
      transmission_vs_oracle,
      symmetry_centers_property,
      spherical_theorem,
      operator_identities,
      spatial_theorem,
      mobility,
      bennett_equivalence,
      collapse,
      [&] { return determinism(cli, spec_dir); },
  };
  bool all = true;
  for (int n = 1; n <= 9; ++n) {
    if (only != 0 && n != only) continue;
    Outcome o;
    try {
      o = criteria[n - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
