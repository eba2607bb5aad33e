#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bennett8/errors.hpp"
#include "linkage_internal.hpp"

namespace bennett8 {

namespace {

constexpr double kReferenceConditioning = 1e-2;

double fold(double angle) { return std::abs(std::remainder(angle, std::numbers::pi)); }

double cross_norm(const OrientedLine& a, const OrientedLine& b) { return a.d().cross(b.d()).norm(); }

OrientedLine slide(const OrientedLine& along, const OrientedLine& hinge, double angle, double offset) {
  return apply(Displacement::screw(along, angle, offset), hinge);
}

// Common perpendicular of the hinges P and Q, oriented so that the turn from
// P to Q about it has the sign of `delta`.
OrientedLine line_through(const OrientedLine& P, const OrientedLine& Q, double delta, int bar) {
  if (cross_norm(P, Q) < kParallelTol) {
    throw Error(ErrorCode::ClosureFailure, "hinges defining " + bar_label(bar) + " are parallel");
  }
  const OrientedLine axis = common_perpendicular(P, Q).axis;
  return delta >= 0.0 ? axis : axis.reversed();
}

void complete_bars(const BarLayout& layout, SpatialEightBarPose& pose) {
  for (int i : {3, 1, 2}) {
    const auto& s = layout[g_bar(i)];
    const OrientedLine& P = pose.hinges[s[0].joint];
    const OrientedLine& Q = pose.hinges[s[1].joint];
    pose.g[i] = line_through(P, Q, wrap_angle(s[1].angle - s[0].angle), g_bar(i));
    pose.hinges[s[2].joint] = slide(pose.g[i], P, s[2].angle - s[0].angle, s[2].offset - s[0].offset);
  }
  const auto& s = layout[h_bar(0)];
  pose.h[0] = line_through(pose.hinges[s[0].joint], pose.hinges[s[1].joint], wrap_angle(s[1].angle - s[0].angle),
                           h_bar(0));
}

double offset_proportion(double offset_g, double angle_h, double offset_h, double angle_g) {
  const double lhs = std::abs(offset_g) * std::sin(fold(angle_h));
  const double rhs = std::abs(offset_h) * std::sin(fold(angle_g));
  const double scale = std::max({lhs, rhs, std::numeric_limits<double>::min()});
  return std::abs(lhs - rhs) / scale;
}

}  // namespace

namespace detail {

void place_driving(const SpatialEightBarGeometry& geom, SpatialEightBarPose& pose) {
  pose.g[0] = OrientedLine::through(Vec3::Zero(), Vec3::UnitZ());
  const std::array<double, 3> phis = {pose.phi1, pose.phi2, pose.phi3};
  const std::array<double, 3> heights = {0.0, geom.a[0], geom.a[2]};
  for (int j = 1; j <= 3; ++j) {
    const double u = geom.angular.u[j - 1];
    const OrientedLine base =
        OrientedLine::through(Vec3(0.0, 0.0, heights[j - 1]), Vec3(std::cos(u), std::sin(u), 0.0));
    pose.hinges[joint_index(0, j)] = base;
    pose.h[j] = slide(base, pose.g[0], phis[j - 1], 0.0);
    for (int k = 1; k < 3; ++k) {
      const BarSlot& s = geom.layout[h_bar(j)][k];
      pose.hinges[s.joint] = slide(pose.h[j], base, s.angle, s.offset);
    }
  }
}

std::optional<BarLayout> reference_layout(const SpatialEightBarGeometry& geom, double phi_ref) {
  SpatialEightBarPose pose;
  pose.phi1 = phi_ref;
  pose.phi2 = coupled_angle(geom.angular.c21, phi_ref);
  pose.phi3 = coupled_angle(geom.angular.c31, phi_ref);
  place_driving(geom, pose);
  for (int j = 1; j <= 3; ++j) {
    if (cross_norm(pose.h[j], pose.g[0]) < kReferenceConditioning) return std::nullopt;
  }
  std::array<Displacement, 6> sigma;
  auto reflection = [&](int k) -> bool {
    const auto [x, y] = kCenterPairs[k];
    const OrientedLine& a = bar_line(pose, x);
    const OrientedLine& b = bar_line(pose, y);
    if (cross_norm(a, b) < kReferenceConditioning) return false;
    sigma[k] = line_reflection(midline_symmetry_axis(a, b.reversed()));
    return true;
  };
  for (int k = 0; k < 3; ++k) {
    if (!reflection(k)) return std::nullopt;
  }
  pose.g[3] = apply(sigma[0], pose.g[0]).reversed();
  pose.g[1] = apply(sigma[1], pose.g[0]).reversed();
  pose.g[2] = apply(sigma[2], pose.g[0]).reversed();
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      if (i == j) continue;
      if (orthogonal_meet_residual(pose.g[i], pose.I(i, j)) > kAssemblyTol) {
        throw Error(ErrorCode::ClosureFailure, "arm tip hinge " + joint_label('I', joint_index(i, j)) +
                                                   " misses " + bar_label(g_bar(i)));
      }
    }
  }
  for (int k = 3; k < 6; ++k) {
    if (!reflection(k)) return std::nullopt;
  }
  pose.h[0] = apply(sigma[3], pose.h[3]).reversed();
  pose.hinges[joint_index(1, 0)] = apply(sigma[3], pose.I(2, 3));
  pose.hinges[joint_index(2, 0)] = apply(sigma[3], pose.I(1, 3));
  pose.hinges[joint_index(3, 0)] = apply(sigma[4], pose.I(2, 1));

  BarLayout layout = geom.layout;
  auto fill = [&](int bar, const OrientedLine& line, std::array<int, 3> joints) {
    const OrientedLine& P = pose.hinges[joints[0]];
    for (int k = 0; k < 3; ++k) {
      const DualAngle arc = k == 0 ? DualAngle{} : signed_dual_arc(line, P, pose.hinges[joints[k]]);
      layout[bar][k] = {joints[k], arc.angle, arc.offset};
    }
  };
  fill(g_bar(3), pose.g[3], {joint_index(3, 1), joint_index(3, 2), joint_index(3, 0)});
  fill(g_bar(1), pose.g[1], {joint_index(1, 2), joint_index(1, 3), joint_index(1, 0)});
  fill(g_bar(2), pose.g[2], {joint_index(2, 1), joint_index(2, 3), joint_index(2, 0)});
  fill(h_bar(0), pose.h[0], {joint_index(1, 0), joint_index(2, 0), joint_index(3, 0)});
  return layout;
}

std::optional<SpatialSymmetry> spatial_symmetry(const SpatialEightBarPose& pose) {
  SpatialSymmetry sym;
  try {
    for (int k = 0; k < 6; ++k) {
      const auto [x, y] = kCenterPairs[k];
      sym.axes[k] = tie_broken(midline_symmetry_axis(bar_line(pose, x), bar_line(pose, y).reversed()));
    }
    int ba = 0, bb = 1;
    double best = -1.0;
    for (int a = 0; a < 6; ++a) {
      for (int b = a + 1; b < 6; ++b) {
        const double c = cross_norm(sym.axes[a], sym.axes[b]);
        if (c > best) {
          best = c;
          ba = a;
          bb = b;
        }
      }
    }
    if (best < kParallelTol) return std::nullopt;
    sym.n = tie_broken(common_perpendicular(sym.axes[ba], sym.axes[bb]).axis);

    int best_k = 0;
    double best_sep = -1.0;
    for (int k = 0; k < 3; ++k) {
      const Vec3& p = sym.axes[k].d();
      const Vec3& q = sym.axes[k + 3].d();
      const double sep = std::min((p - q).norm(), (p + q).norm());
      if (sep > best_sep) {
        best_sep = sep;
        best_k = k;
      }
    }
    double best_swap = std::numeric_limits<double>::infinity();
    for (const OrientedLine& target : {sym.axes[best_k + 3], sym.axes[best_k + 3].reversed()}) {
      OrientedLine candidate;
      try {
        candidate = midline_symmetry_axis(sym.axes[best_k], target);
      } catch (const Error&) {
        continue;
      }
      const Displacement r = line_reflection(candidate);
      double swap = 0.0;
      for (int k = 0; k < 3; ++k) swap += line_set_difference(apply(r, sym.axes[k]), sym.axes[k + 3]);
      if (swap < best_swap) {
        best_swap = swap;
        sym.t = tie_broken(candidate);
      }
    }
    if (!std::isfinite(best_swap)) return std::nullopt;
  } catch (const Error&) {
    return std::nullopt;
  }
  return sym;
}

}  // namespace detail

SpatialEightBarPose assemble_spatial(const SpatialEightBarGeometry& geom, double phi1) {
  if (!std::isfinite(phi1)) throw Error(ErrorCode::InvalidSpec, "driving angle must be finite");
  SpatialEightBarPose pose;
  pose.phi1 = wrap_angle(phi1);
  pose.phi2 = coupled_angle(geom.angular.c21, pose.phi1);
  pose.phi3 = coupled_angle(geom.angular.c31, pose.phi1);
  detail::place_driving(geom, pose);
  pose.collapsed = cross_norm(pose.h[1], pose.g[0]) < kParallelTol;
  complete_bars(geom.layout, pose);
  if (!pose.collapsed) pose.symmetry = detail::spatial_symmetry(pose);
  pose.closure_residual = closure_report(geom, pose).worst("closure");
  if (!(pose.closure_residual < kAssemblyTol)) {
    throw Error(ErrorCode::ClosureFailure,
                "spatial eight-bar does not close at phi1 = " + std::to_string(phi1) + ": residual " +
                    std::to_string(pose.closure_residual));
  }
  return pose;
}

Report closure_report(const SpatialEightBarGeometry& geom, const SpatialEightBarPose& pose) {
  Report rep;
  for (int bar = 0; bar < kBarCount; ++bar) {
    const OrientedLine& line = detail::bar_line(pose, bar);
    const auto& s = geom.layout[bar];
    const OrientedLine& P = pose.hinges[s[0].joint];
    for (int k = 0; k < 3; ++k) {
      const std::string hinge = joint_label('I', s[k].joint);
      const OrientedLine& X = pose.hinges[s[k].joint];
      rep.add("closure", hinge + " meets " + bar_label(bar), orthogonal_meet_residual(line, X));
      if (k > 0) {
        const DualAngle arc = signed_dual_arc(line, P, X);
        rep.add("closure", hinge + " position on " + bar_label(bar),
                std::abs(wrap_angle(arc.angle - (s[k].angle - s[0].angle))) +
                    std::abs(arc.offset - (s[k].offset - s[0].offset)));
      }
    }
  }
  for (int idx = 0; idx < kJointCount; ++idx) {
    const auto [i, j] = joint_pair(idx);
    const OrientedLine& X = pose.hinges[idx];
    rep.add("closure", bar_label(g_bar(i)) + " and " + bar_label(h_bar(j)) + " meet on " + joint_label('I', idx),
            (closest_point(X, pose.g[i]) - closest_point(X, pose.h[j])).norm());
  }
  for (int k = 0; k < 6; ++k) {
    const auto [a, b, x, y] = kCells[k];
    const std::string cell = "cell " + std::to_string(k + 1);
    const DualAngle ga = signed_dual_arc(pose.g[a], pose.I(a, x), pose.I(a, y));
    const DualAngle gb = signed_dual_arc(pose.g[b], pose.I(b, x), pose.I(b, y));
    const DualAngle hx = signed_dual_arc(pose.h[x], pose.I(a, x), pose.I(b, x));
    const DualAngle hy = signed_dual_arc(pose.h[y], pose.I(a, y), pose.I(b, y));
    rep.add("cells", cell + " basis/coupler twist", std::abs(fold(ga.angle) - fold(gb.angle)));
    rep.add("cells", cell + " basis/coupler length", std::abs(std::abs(ga.offset) - std::abs(gb.offset)));
    rep.add("cells", cell + " arm twist", std::abs(fold(hx.angle) - fold(hy.angle)));
    rep.add("cells", cell + " arm length", std::abs(std::abs(hx.offset) - std::abs(hy.offset)));
    rep.add("cells", cell + " proportion", offset_proportion(ga.offset, hx.angle, hx.offset, ga.angle));
  }
  return rep;
}

Report symmetry_report_spatial(const SpatialEightBarPose& pose) {
  if (!pose.symmetry) throw Error(ErrorCode::CollapsedPose, "symmetry elements are undefined in an aligned pose");
  const SpatialSymmetry& sym = *pose.symmetry;
  std::array<Displacement, 6> s;
  for (int k = 0; k < 6; ++k) s[k] = line_reflection(sym.axes[k]);
  auto c = [](const Displacement& x, const Displacement& y) { return compose(x, y); };
  Report rep;

  rep.add("alignment", "g3 = rev s1(g0)", line_difference(pose.g[3], apply(s[0], pose.g[0]).reversed()));
  rep.add("alignment", "g1 = rev s2(g0)", line_difference(pose.g[1], apply(s[1], pose.g[0]).reversed()));
  rep.add("alignment", "g2 = rev s3(g0)", line_difference(pose.g[2], apply(s[2], pose.g[0]).reversed()));
  rep.add("alignment", "h0 = rev s4(h3)", line_difference(pose.h[0], apply(s[3], pose.h[3]).reversed()));
  rep.add("alignment", "h0 = rev s5(h1)", line_difference(pose.h[0], apply(s[4], pose.h[1]).reversed()));
  rep.add("alignment", "h0 = rev s6(h2)", line_difference(pose.h[0], apply(s[5], pose.h[2]).reversed()));
  for (int k = 0; k < 6; ++k) {
    const auto [a, b, x, y] = kCells[k];
    const std::string name = "s" + std::to_string(k + 1) + " swaps ";
    rep.add("alignment", name + joint_label('I', joint_index(a, x)),
            line_set_difference(apply(s[k], pose.I(a, x)), pose.I(b, y)));
    rep.add("alignment", name + joint_label('I', joint_index(a, y)),
            line_set_difference(apply(s[k], pose.I(a, y)), pose.I(b, x)));
  }

  const Displacement tau321 = c(s[2], c(s[1], s[0]));
  const Displacement tau654 = c(s[5], c(s[4], s[3]));
  rep.add("products", "tau321 involutive", displacement_distance(tau321, inverse(tau321)));
  rep.add("products", "tau654 involutive", displacement_distance(tau654, inverse(tau654)));
  rep.add("products", "s3 (s2 s1) s3 = s1 s2", displacement_distance(c(s[2], c(c(s[1], s[0]), s[2])), c(s[0], s[1])));
  rep.add("products", "s4 s2 = s5 s1", displacement_distance(c(s[3], s[1]), c(s[4], s[0])));
  rep.add("products", "s6 s2 = s5 s3", displacement_distance(c(s[5], s[1]), c(s[4], s[2])));
  rep.add("products", "s6 s1 = s4 s3", displacement_distance(c(s[5], s[0]), c(s[3], s[2])));
  rep.add("products", "s5 s4 = s1 s2", displacement_distance(c(s[4], s[3]), c(s[0], s[1])));
  rep.add("products", "s6 s5 = s2 s3", displacement_distance(c(s[5], s[4]), c(s[1], s[2])));
  rep.add("products", "s4 s6 = s3 s1", displacement_distance(c(s[3], s[5]), c(s[2], s[0])));
  rep.add("products", "tau321 axis meets h1 at right angles",
          orthogonal_meet_residual(screw_axis(tau321).axis, pose.h[1]));
  rep.add("products", "tau654 axis meets g1 at right angles",
          orthogonal_meet_residual(screw_axis(tau654).axis, pose.g[1]));

  struct TableRow {
    int i;
    Displacement rho;
    const char* name;
  };
  const TableRow rows[] = {{1, c(s[5], s[0]), "s6 s1"}, {2, c(s[3], s[1]), "s4 s2"}, {3, c(s[4], s[2]), "s5 s3"}};
  for (const TableRow& row : rows) {
    const std::string name = row.name;
    const std::string gi = bar_label(g_bar(row.i)), hi = bar_label(h_bar(row.i));
    rep.add("rotation_table", name + ": g0 -> " + gi, line_difference(apply(row.rho, pose.g[0]), pose.g[row.i]));
    rep.add("rotation_table", name + ": " + hi + " -> h0", line_difference(apply(row.rho, pose.h[row.i]), pose.h[0]));
    rep.add("rotation_table", name + " screw axis is n", line_set_difference(screw_axis(row.rho).axis, sym.n));
  }

  for (int k = 0; k < 6; ++k) {
    rep.add("common_perpendicular", "s" + std::to_string(k + 1) + " meets n at right angles",
            orthogonal_meet_residual(sym.axes[k], sym.n));
  }

  const Displacement t = line_reflection(sym.t);
  rep.add("axis_symmetry", "t meets n at right angles", orthogonal_meet_residual(sym.t, sym.n));
  for (int k = 0; k < 3; ++k) {
    rep.add("axis_symmetry", "t swaps s" + std::to_string(k + 1) + ", s" + std::to_string(k + 4),
            line_set_difference(apply(t, sym.axes[k]), sym.axes[k + 3]));
  }
  for (int i = 0; i < 4; ++i) {
    const OrientedLine pg = common_perpendicular(sym.n, pose.g[i]).axis;
    const OrientedLine ph = common_perpendicular(sym.n, pose.h[i]).axis;
    rep.add("axis_symmetry", "perpendiculars from n to " + bar_label(g_bar(i)) + ", " + bar_label(h_bar(i)),
            line_set_difference(apply(t, pg), ph));
  }

  const DualAngle g0n = dual_angle(sym.n, pose.g[0]);
  const DualAngle h0n = dual_angle(sym.n, pose.h[0]);
  for (int i = 1; i < 4; ++i) {
    const DualAngle gi = dual_angle(sym.n, pose.g[i]);
    const DualAngle hi = dual_angle(sym.n, pose.h[i]);
    rep.add("cohorts", "angle of " + bar_label(g_bar(i)) + " with n", std::abs(fold(gi.angle) - fold(g0n.angle)));
    rep.add("cohorts", "distance of " + bar_label(g_bar(i)) + " to n",
            std::abs(std::abs(gi.offset) - std::abs(g0n.offset)));
    rep.add("cohorts", "angle of " + bar_label(h_bar(i)) + " with n", std::abs(fold(hi.angle) - fold(h0n.angle)));
    rep.add("cohorts", "distance of " + bar_label(h_bar(i)) + " to n",
            std::abs(std::abs(hi.offset) - std::abs(h0n.offset)));
  }
  return rep;
}

}  // namespace bennett8
