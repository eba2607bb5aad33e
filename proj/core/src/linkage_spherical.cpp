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

SpherePoint along(const OrientedGreatCircle& g, const SpherePoint& P, double arc) {
  return apply(rotation_about(SpherePoint(g.n()), arc), P);
}

// Circle through P and Q oriented so that Q follows P by an arc of sign `delta`.
OrientedGreatCircle circle_through(const SpherePoint& P, const SpherePoint& Q, double delta, int bar) {
  const Vec3 c = P.v().cross(Q.v());
  if (c.norm() < kCoplanarTol) {
    throw Error(ErrorCode::ClosureFailure, "joints defining " + bar_label(bar) + " coincide or are antipodal");
  }
  return OrientedGreatCircle(delta >= 0.0 ? c : Vec3(-c));
}

void complete_bars(const BarLayout& layout, EightBarPose& pose) {
  for (int i : {3, 1, 2}) {
    const auto& s = layout[g_bar(i)];
    const SpherePoint& P = pose.joints[s[0].joint];
    const SpherePoint& Q = pose.joints[s[1].joint];
    pose.g[i] = circle_through(P, Q, wrap_angle(s[1].angle - s[0].angle), g_bar(i));
    pose.joints[s[2].joint] = along(pose.g[i], P, s[2].angle - s[0].angle);
  }
  const auto& s = layout[h_bar(0)];
  pose.h[0] = circle_through(pose.joints[s[0].joint], pose.joints[s[1].joint], wrap_angle(s[1].angle - s[0].angle),
                             h_bar(0));
}

double min_cross(const OrientedGreatCircle& a, const OrientedGreatCircle& b) { return a.n().cross(b.n()).norm(); }

}  // namespace

namespace detail {

void place_driving(const EightBarGeometry& geom, EightBarPose& pose) {
  pose.g[0] = OrientedGreatCircle(Vec3::UnitZ());
  const std::array<double, 3> phis = {pose.phi1, pose.phi2, pose.phi3};
  for (int j = 1; j <= 3; ++j) {
    const double u = geom.u[j - 1];
    const SpherePoint base(Vec3(std::cos(u), std::sin(u), 0.0));
    pose.joints[joint_index(0, j)] = base;
    pose.h[j] = apply(rotation_about(base, phis[j - 1]), pose.g[0]);
    for (int k = 1; k < 3; ++k) {
      const BarSlot& s = geom.layout[h_bar(j)][k];
      pose.joints[s.joint] = along(pose.h[j], base, s.angle);
    }
  }
}

std::optional<BarLayout> reference_layout(const EightBarGeometry& geom, double phi_ref) {
  EightBarPose pose;
  pose.phi1 = phi_ref;
  pose.phi2 = coupled_angle(geom.c21, phi_ref);
  pose.phi3 = coupled_angle(geom.c31, phi_ref);
  place_driving(geom, pose);
  for (int j = 1; j <= 3; ++j) {
    if (min_cross(pose.h[j], pose.g[0]) < kReferenceConditioning) return std::nullopt;
  }
  std::array<SphericalRotation, 6> sigma;
  auto center = [&](const OrientedGreatCircle& a, const OrientedGreatCircle& b) -> std::optional<SphericalRotation> {
    if (min_cross(a, b) < kReferenceConditioning) return std::nullopt;
    return half_turn(symmetry_centers(a, b.reversed()).S);
  };
  for (int k = 0; k < 3; ++k) {
    const auto [x, y] = detail::kCenterPairs[k];
    auto r = center(bar_circle(pose, x), bar_circle(pose, y));
    if (!r) return std::nullopt;
    sigma[k] = *r;
  }
  // Couplers of the driving cells: g3 from cell 1, g1 from cell 2, g2 from cell 3.
  pose.g[3] = apply(sigma[0], pose.g[0]).reversed();
  pose.g[1] = apply(sigma[1], pose.g[0]).reversed();
  pose.g[2] = apply(sigma[2], pose.g[0]).reversed();
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      if (i == j) continue;
      if (incidence(pose.g[i], pose.R(i, j)) > kAssemblyTol) {
        throw Error(ErrorCode::ClosureFailure, "arm tip " + joint_label('R', joint_index(i, j)) + " misses " +
                                                   bar_label(g_bar(i)));
      }
    }
  }
  for (int k = 3; k < 6; ++k) {
    const auto [x, y] = detail::kCenterPairs[k];
    auto r = center(bar_circle(pose, x), bar_circle(pose, y));
    if (!r) return std::nullopt;
    sigma[k] = *r;
  }
  pose.h[0] = apply(sigma[3], pose.h[3]).reversed();
  pose.joints[joint_index(1, 0)] = apply(sigma[3], pose.R(2, 3));
  pose.joints[joint_index(2, 0)] = apply(sigma[3], pose.R(1, 3));
  pose.joints[joint_index(3, 0)] = apply(sigma[4], pose.R(2, 1));

  BarLayout layout = geom.layout;
  auto fill = [&](int bar, const OrientedGreatCircle& c, std::array<int, 3> joints) {
    const SpherePoint& P = pose.joints[joints[0]];
    for (int k = 0; k < 3; ++k) {
      layout[bar][k] = {joints[k], k == 0 ? 0.0 : signed_arc(c, P, pose.joints[joints[k]]), 0.0};
    }
  };
  fill(g_bar(3), pose.g[3], {joint_index(3, 1), joint_index(3, 2), joint_index(3, 0)});
  fill(g_bar(1), pose.g[1], {joint_index(1, 2), joint_index(1, 3), joint_index(1, 0)});
  fill(g_bar(2), pose.g[2], {joint_index(2, 1), joint_index(2, 3), joint_index(2, 0)});
  fill(h_bar(0), pose.h[0], {joint_index(1, 0), joint_index(2, 0), joint_index(3, 0)});
  return layout;
}

std::optional<SphericalSymmetry> spherical_symmetry(const EightBarPose& pose) {
  SphericalSymmetry sym;
  try {
    for (int k = 0; k < 6; ++k) {
      const auto [x, y] = kCenterPairs[k];
      sym.centers[k] = symmetry_centers(bar_circle(pose, x), bar_circle(pose, y).reversed()).S;
    }
  } catch (const Error&) {
    return std::nullopt;
  }
  Vec3 best_normal = Vec3::Zero();
  for (int a = 0; a < 6; ++a) {
    for (int b = a + 1; b < 6; ++b) {
      const Vec3 c = sym.centers[a].v().cross(sym.centers[b].v());
      if (c.norm() > best_normal.norm()) best_normal = c;
    }
  }
  if (best_normal.norm() < kCoplanarTol) return std::nullopt;
  sym.n = OrientedGreatCircle(tie_break(best_normal.normalized()));
  sym.N = SpherePoint(sym.n.n());

  int best_k = 0;
  double best_sep = -1.0;
  for (int k = 0; k < 3; ++k) {
    const Vec3& p = sym.centers[k].v();
    const Vec3& q = sym.centers[k + 3].v();
    const double sep = std::min((p - q).norm(), (p + q).norm());
    if (sep > best_sep) {
      best_sep = sep;
      best_k = k;
    }
  }
  if (best_sep < kCoplanarTol) return std::nullopt;
  const SpherePoint& P = sym.centers[best_k];
  const SpherePoint& Q = sym.centers[best_k + 3];
  sym.t1 = OrientedGreatCircle(tie_break(bisector_circle(P, Q).n()));
  sym.t2 = OrientedGreatCircle(tie_break(bisector_circle(P, antipode(Q)).n()));
  return sym;
}

}  // namespace detail

EightBarPose assemble_spherical(const EightBarGeometry& geom, double phi1) {
  if (!std::isfinite(phi1)) throw Error(ErrorCode::InvalidSpec, "driving angle must be finite");
  EightBarPose pose;
  pose.phi1 = wrap_angle(phi1);
  pose.phi2 = coupled_angle(geom.c21, pose.phi1);
  pose.phi3 = coupled_angle(geom.c31, pose.phi1);
  detail::place_driving(geom, pose);
  pose.collapsed = min_cross(pose.h[1], pose.g[0]) < kCoplanarTol;
  complete_bars(geom.layout, pose);
  if (!pose.collapsed) pose.symmetry = detail::spherical_symmetry(pose);
  pose.closure_residual = closure_report(geom, pose).worst("closure");
  if (!(pose.closure_residual < kAssemblyTol)) {
    throw Error(ErrorCode::ClosureFailure,
                "eight-bar does not close at phi1 = " + std::to_string(phi1) + ": residual " +
                    std::to_string(pose.closure_residual));
  }
  return pose;
}

Report closure_report(const EightBarGeometry& geom, const EightBarPose& pose) {
  Report rep;
  for (int bar = 0; bar < kBarCount; ++bar) {
    const OrientedGreatCircle& c = detail::bar_circle(pose, bar);
    const auto& s = geom.layout[bar];
    const SpherePoint& P = pose.joints[s[0].joint];
    for (int k = 0; k < 3; ++k) {
      const std::string joint = joint_label('R', s[k].joint);
      rep.add("closure", joint + " on " + bar_label(bar), incidence(c, pose.joints[s[k].joint]));
      if (k > 0) {
        const double arc = signed_arc(c, P, pose.joints[s[k].joint]);
        rep.add("closure", joint + " position on " + bar_label(bar), std::abs(wrap_angle(arc - (s[k].angle - s[0].angle))));
      }
    }
  }
  for (int k = 0; k < 6; ++k) {
    const auto [a, b, x, y] = kCells[k];
    const std::string cell = "cell " + std::to_string(k + 1);
    const double ga = signed_arc(pose.g[a], pose.R(a, x), pose.R(a, y));
    const double gb = signed_arc(pose.g[b], pose.R(b, x), pose.R(b, y));
    const double hx = signed_arc(pose.h[x], pose.R(a, x), pose.R(b, x));
    const double hy = signed_arc(pose.h[y], pose.R(a, y), pose.R(b, y));
    rep.add("cells", cell + " basis/coupler", std::abs(fold(ga) - fold(gb)));
    rep.add("cells", cell + " arms", std::abs(fold(hx) - fold(hy)));
  }
  return rep;
}

Report halfturn_products_report(const EightBarPose& pose) {
  if (!pose.symmetry) throw Error(ErrorCode::CollapsedPose, "symmetry elements are undefined in an aligned pose");
  const SphericalSymmetry& sym = *pose.symmetry;
  std::array<SphericalRotation, 6> s;
  for (int k = 0; k < 6; ++k) s[k] = half_turn(sym.centers[k]);
  auto c = [](const SphericalRotation& x, const SphericalRotation& y) { return compose(x, y); };
  Report rep;

  rep.add("alignment", "g3 = rev s1(g0)", circle_difference(pose.g[3], apply(s[0], pose.g[0]).reversed()));
  rep.add("alignment", "g1 = rev s2(g0)", circle_difference(pose.g[1], apply(s[1], pose.g[0]).reversed()));
  rep.add("alignment", "g2 = rev s3(g0)", circle_difference(pose.g[2], apply(s[2], pose.g[0]).reversed()));
  rep.add("alignment", "h0 = rev s4(h3)", circle_difference(pose.h[0], apply(s[3], pose.h[3]).reversed()));
  rep.add("alignment", "h0 = rev s5(h1)", circle_difference(pose.h[0], apply(s[4], pose.h[1]).reversed()));
  rep.add("alignment", "h0 = rev s6(h2)", circle_difference(pose.h[0], apply(s[5], pose.h[2]).reversed()));
  for (int k = 0; k < 6; ++k) {
    const auto [a, b, x, y] = kCells[k];
    const std::string name = "s" + std::to_string(k + 1) + " swaps ";
    rep.add("alignment", name + joint_label('R', joint_index(a, x)),
            axis_difference(apply(s[k], pose.R(a, x)), pose.R(b, y)));
    rep.add("alignment", name + joint_label('R', joint_index(a, y)),
            axis_difference(apply(s[k], pose.R(a, y)), pose.R(b, x)));
  }

  const SphericalRotation tau321 = c(s[2], c(s[1], s[0]));
  const SphericalRotation tau654 = c(s[5], c(s[4], s[3]));
  rep.add("products", "tau321 involutive", rotation_distance(tau321, inverse(tau321)));
  rep.add("products", "tau654 involutive", rotation_distance(tau654, inverse(tau654)));
  rep.add("products", "s3 (s2 s1) s3 = s1 s2", rotation_distance(c(s[2], c(c(s[1], s[0]), s[2])), c(s[0], s[1])));
  rep.add("products", "s4 s2 = s5 s1", rotation_distance(c(s[3], s[1]), c(s[4], s[0])));
  rep.add("products", "s6 s2 = s5 s3", rotation_distance(c(s[5], s[1]), c(s[4], s[2])));
  rep.add("products", "s6 s1 = s4 s3", rotation_distance(c(s[5], s[0]), c(s[3], s[2])));
  rep.add("products", "s5 s4 = s1 s2", rotation_distance(c(s[4], s[3]), c(s[0], s[1])));
  rep.add("products", "s6 s5 = s2 s3", rotation_distance(c(s[5], s[4]), c(s[1], s[2])));
  rep.add("products", "s4 s6 = s3 s1", rotation_distance(c(s[3], s[5]), c(s[2], s[0])));
  rep.add("products", "tau321 axis in plane of h1", std::abs(tau321.axis().dot(pose.h[1].n())));
  rep.add("products", "tau654 axis in plane of g1", std::abs(tau654.axis().dot(pose.g[1].n())));

  struct TableRow {
    int i;
    SphericalRotation rho;
    const char* name;
  };
  const TableRow rows[] = {{1, c(s[5], s[0]), "s6 s1"}, {2, c(s[3], s[1]), "s4 s2"}, {3, c(s[4], s[2]), "s5 s3"}};
  for (const TableRow& row : rows) {
    const std::string name = row.name;
    const std::string gi = bar_label(g_bar(row.i)), hi = bar_label(h_bar(row.i));
    rep.add("rotation_table", name + ": g0 -> " + gi, circle_difference(apply(row.rho, pose.g[0]), pose.g[row.i]));
    rep.add("rotation_table", name + ": " + hi + " -> h0", circle_difference(apply(row.rho, pose.h[row.i]), pose.h[0]));
    rep.add("rotation_table", name + " axis through N", axis_difference(SpherePoint(row.rho.axis()), sym.N));
  }

  rep.add("bisector_symmetry", "t1 orthogonal to t2", std::abs(sym.t1.n().dot(sym.t2.n())));
  rep.add("bisector_symmetry", "N on t1", std::abs(sym.t1.n().dot(sym.N.v())));
  rep.add("bisector_symmetry", "N on t2", std::abs(sym.t2.n().dot(sym.N.v())));
  for (int k = 0; k < 3; ++k) {
    rep.add("bisector_symmetry", "t1 swaps S" + std::to_string(k + 1) + ", S" + std::to_string(k + 4),
            axis_difference(reflect_in_circle(sym.t1, sym.centers[k]), sym.centers[k + 3]));
  }
  rep.add("bisector_symmetry", "t1 maps axis of tau321 to axis of tau654",
          axis_difference(reflect_in_circle(sym.t1, SpherePoint(tau321.axis())), SpherePoint(tau654.axis())));
  for (int i = 0; i < 4; ++i) {
    const Vec3 xg = sym.N.v().cross(pose.g[i].n());
    const Vec3 xh = sym.N.v().cross(pose.h[i].n());
    if (xg.norm() < kCoplanarTol || xh.norm() < kCoplanarTol) {
      throw Error(ErrorCode::CollapsedPose, "a bar circle coincides with n");
    }
    rep.add("bisector_symmetry", "n meets " + bar_label(g_bar(i)) + ", " + bar_label(h_bar(i)) + " symmetrically",
            axis_difference(reflect_in_circle(sym.t1, SpherePoint(xg)), SpherePoint(xh)));
  }

  for (int k = 0; k < 6; ++k) {
    rep.add("center_circle", "S" + std::to_string(k + 1) + " on n", std::abs(sym.centers[k].v().dot(sym.n.n())));
  }
  for (int i = 1; i < 4; ++i) {
    rep.add("center_circle", "angle of " + bar_label(g_bar(i)) + " with n",
            std::abs(circle_angle(pose.g[i], sym.n) - circle_angle(pose.g[0], sym.n)));
    rep.add("center_circle", "angle of " + bar_label(h_bar(i)) + " with n",
            std::abs(circle_angle(pose.h[i], sym.n) - circle_angle(pose.h[0], sym.n)));
  }
  const double d10 = std::abs(pose.R(1, 0).v().dot(sym.N.v()));
  for (auto [i, j] : {std::pair{0, 1}, std::pair{2, 3}, std::pair{3, 2}}) {
    rep.add("center_circle", joint_label('R', joint_index(i, j)) + " as far from n as R10",
            std::abs(std::abs(pose.R(i, j).v().dot(sym.N.v())) - d10));
  }
  return rep;
}

}  // namespace bennett8
