#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "bennett8/errors.hpp"
#include "linkage_internal.hpp"

namespace bennett8 {

namespace {

// Signed angle from circle normal a to circle normal b about the joint axis r.
double turn(const Vec3& a, const Vec3& b, const Vec3& r) { return std::atan2(a.cross(b).dot(r), a.dot(b)); }

constexpr double kMobilityResidual = 1e-9;

template <class Pose>
std::vector<double> angles_from(const Pose& pose, const auto& axis_of, const auto& dir_of) {
  std::vector<double> out(kJointCount);
  for (int idx = 0; idx < kJointCount; ++idx) {
    const auto [i, j] = joint_pair(idx);
    out[idx] = turn(dir_of(pose.g[i]), dir_of(pose.h[j]), axis_of(pose, idx));
  }
  return out;
}

template <class Geometry, class Assemble>
std::vector<MobilitySample> mobility(const Geometry& geom, const BarLayout& layout, bool spatial,
                                     const std::vector<double>& phis, Assemble assemble) {
  const oracle::LoopSystem system = closure_system(layout, spatial);
  std::vector<MobilitySample> out;
  for (double phi : phis) {
    MobilitySample s;
    s.phi1 = phi;
    try {
      const auto pose = assemble(geom, phi);
      const std::vector<double> angles = joint_angles(pose);
      s.residual = oracle::closure_residual(system, angles).norm();
      s.nullity = oracle::jacobian_nullity(system, angles);
      if (pose.collapsed) {
        s.status = "aligned pose (bifurcation)";
      } else if (!(s.residual < kMobilityResidual)) {
        s.status = "closure residual too large";
      } else {
        s.status = "ok";
      }
    } catch (const Error& e) {
      s.status = std::string(to_string(e.code())) + ": " + e.what();
    }
    out.push_back(s);
  }
  return out;
}

template <class Pose, class Geometry, class Assemble, class Reports>
std::vector<SweepSample<Pose>> run_sweep(const Geometry& geom, const std::vector<double>& phis, unsigned threads,
                                         bool spatial, Assemble assemble, Reports reports) {
  const std::vector<std::string> families = sweep_families(spatial);
  std::vector<SweepSample<Pose>> out(phis.size());
  auto work = [&](size_t k) {
    SweepSample<Pose>& s = out[k];
    s.phi1 = phis[k];
    s.family_max.assign(families.size(), std::numeric_limits<double>::quiet_NaN());
    try {
      Pose pose = assemble(geom, phis[k]);
      Report rep = closure_report(geom, pose);
      if (pose.symmetry) {
        const Report more = reports(pose);
        rep.entries.insert(rep.entries.end(), more.entries.begin(), more.entries.end());
      }
      for (size_t f = 0; f < families.size(); ++f) {
        const bool present = std::any_of(rep.entries.begin(), rep.entries.end(),
                                         [&](const Residual& r) { return r.family == families[f]; });
        if (present) s.family_max[f] = rep.worst(families[f]);
      }
      s.pose = std::move(pose);
    } catch (const Error& e) {
      s.error = std::string(to_string(e.code())) + ": " + e.what();
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<size_t>(threads, std::max<size_t>(1, phis.size())));
  if (threads <= 1) {
    for (size_t k = 0; k < phis.size(); ++k) work(k);
    return out;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (size_t k = next++; k < phis.size(); k = next++) work(k);
    });
  }
  for (std::thread& th : pool) th.join();
  return out;
}

}  // namespace

oracle::LoopSystem closure_system(const BarLayout& layout, bool spatial) {
  oracle::LoopSystem sys;
  sys.num_joints = kJointCount;
  sys.spatial = spatial;
  auto step = [&](int bar, int from, int to) {
    const BarSlot& a = detail::slot(layout, bar, from);
    const BarSlot& b = detail::slot(layout, bar, to);
    return std::pair{b.angle - a.angle, spatial ? b.offset - a.offset : 0.0};
  };
  for (const auto& [a, b, x, y] : kCells) {
    const int ax = joint_index(a, x), ay = joint_index(a, y), by = joint_index(b, y), bx = joint_index(b, x);
    // Frames sit on the bars with z along the joint axis and x along the bar.
    const auto [t1, o1] = step(g_bar(a), ax, ay);
    const auto [t2, o2] = step(h_bar(y), ay, by);
    const auto [t3, o3] = step(g_bar(b), by, bx);
    const auto [t4, o4] = step(h_bar(x), bx, ax);
    sys.loops.push_back({{ax, -1, t1, o1}, {ay, 1, t2, o2}, {by, -1, t3, o3}, {bx, 1, t4, o4}});
  }
  return sys;
}

std::vector<double> joint_angles(const EightBarPose& pose) {
  return angles_from(
      pose, [](const EightBarPose& p, int idx) -> Vec3 { return p.joints[idx].v(); },
      [](const OrientedGreatCircle& c) -> Vec3 { return c.n(); });
}

std::vector<double> joint_angles(const SpatialEightBarPose& pose) {
  return angles_from(
      pose, [](const SpatialEightBarPose& p, int idx) -> Vec3 { return p.hinges[idx].d(); },
      [](const OrientedLine& l) -> Vec3 { return l.d(); });
}

oracle::LoopProblem spherical_isogram_loop(const SphericalIsogramSpec& spec, const SphericalIsogramPose& pose) {
  oracle::LoopProblem p;
  p.twists = {spec.alpha, -spec.beta, -spec.alpha, spec.beta};
  p.driving_joint = 0;
  p.driving_value = -pose.phi1;
  p.initial = isogram_joint_angles(pose);
  return p;
}

oracle::LoopProblem bennett_isogram_loop(const BennettIsogramSpec& spec, const BennettIsogramPose& pose) {
  oracle::LoopProblem p;
  p.twists = {spec.alpha_twist, -spec.beta_twist, -spec.alpha_twist, spec.beta_twist};
  p.offsets = {spec.a_len, -spec.b_len, -spec.a_len, spec.b_len};
  p.driving_joint = 0;
  p.driving_value = -pose.phi1;
  p.initial = isogram_joint_angles(pose);
  return p;
}

std::vector<double> isogram_joint_angles(const SphericalIsogramPose& pose) {
  // sides: AB, BC, DC, DA. Each joint turns from the incoming side to the outgoing one.
  const auto& s = pose.sides;
  return {turn(s[3].n(), s[0].n(), pose.A.v()), turn(s[0].n(), s[1].n(), pose.B.v()),
          turn(s[1].n(), s[2].n(), pose.C.v()), turn(s[2].n(), s[3].n(), pose.D.v())};
}

std::vector<double> isogram_joint_angles(const BennettIsogramPose& pose) {
  const auto& s = pose.sides;
  const auto& I = pose.hinges;
  return {turn(s[3].d(), s[0].d(), I[0].d()), turn(s[0].d(), s[1].d(), I[1].d()),
          turn(s[1].d(), s[2].d(), I[2].d()), turn(s[2].d(), s[3].d(), I[3].d())};
}

std::vector<MobilitySample> mobility_check(const EightBarGeometry& geom, const std::vector<double>& phi_samples) {
  return mobility(geom, geom.layout, false, phi_samples,
                  [](const EightBarGeometry& g, double phi) { return assemble_spherical(g, phi); });
}

std::vector<MobilitySample> mobility_check(const SpatialEightBarGeometry& geom,
                                           const std::vector<double>& phi_samples) {
  return mobility(geom, geom.layout, true, phi_samples,
                  [](const SpatialEightBarGeometry& g, double phi) { return assemble_spatial(g, phi); });
}

std::vector<SweepSample<EightBarPose>> sweep(const EightBarGeometry& geom, const std::vector<double>& phis,
                                             unsigned threads) {
  return run_sweep<EightBarPose>(
      geom, phis, threads, false, [](const EightBarGeometry& g, double phi) { return assemble_spherical(g, phi); },
      [](const EightBarPose& p) { return halfturn_products_report(p); });
}

std::vector<SweepSample<SpatialEightBarPose>> sweep(const SpatialEightBarGeometry& geom,
                                                    const std::vector<double>& phis, unsigned threads) {
  return run_sweep<SpatialEightBarPose>(
      geom, phis, threads, true, [](const SpatialEightBarGeometry& g, double phi) { return assemble_spatial(g, phi); },
      [](const SpatialEightBarPose& p) { return symmetry_report_spatial(p); });
}

}  // namespace bennett8
