#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bennett8/isogram.hpp"
#include "bennett8/oracle.hpp"
#include "bennett8/screw_geom.hpp"
#include "bennett8/sphere_geom.hpp"

namespace bennett8 {

// Cube linkgraph: bars g0..g3 carry indices 0..3 and h0..h3 indices 4..7.
// Joint (i, j), i != j, joins g_i and h_j.
inline constexpr int kBarCount = 8;
inline constexpr int kJointCount = 12;

int joint_index(int i, int j);
std::pair<int, int> joint_pair(int index);
std::string joint_label(char prefix, int index);  // e.g. "R01", "I23"
std::string bar_label(int bar);                   // "g0".."h3"
inline int g_bar(int i) { return i; }
inline int h_bar(int j) { return 4 + j; }

// The six cells as {g_a, g_b, h_x, h_y}. The first three are the driving
// isograms on the fixed bar g0; the last three close the linkage via h0.
inline constexpr std::array<std::array<int, 4>, 6> kCells = {{
    {0, 3, 1, 2},
    {0, 1, 2, 3},
    {0, 2, 1, 3},
    {1, 2, 3, 0},
    {2, 3, 1, 0},
    {1, 3, 2, 0},
}};

// Position of a joint along its bar, relative to the bar's first slot.
// Spherical layouts leave offset at zero.
struct BarSlot {
  int joint = 0;
  double angle = 0.0;
  double offset = 0.0;
};
using BarLayout = std::array<std::array<BarSlot, 3>, kBarCount>;

struct EightBarSpec {
  double u1 = 0.0, u2 = 0.0, u3 = 0.0;  // basis joints on g0
  double beta1 = 0.0, beta2 = 0.0;
  std::optional<double> beta3;
  Branch branch1 = Branch::Plus;
  Branch branch2 = Branch::Plus;
  std::optional<Branch> branch3;
};

struct SpatialEightBarSpec {
  EightBarSpec angular;
  double a1 = 0.0, a2 = 0.0;  // basis lengths along g0
  std::optional<double> b1, b2, b3;
};

struct EightBarGeometry {
  EightBarSpec spec;  // with beta3 and branch3 present
  std::array<double, 3> u{};
  std::array<double, 3> alpha{};  // alpha3 = alpha1 + alpha2
  std::array<double, 3> beta{};
  std::array<Branch, 3> branch{};
  double c21 = 0.0, c32 = 0.0, c31 = 0.0;
  BarLayout layout{};
};

struct SpatialEightBarGeometry {
  SpatialEightBarSpec spec;  // with every offset present
  EightBarGeometry angular;
  std::array<double, 3> a{};        // a1, a2, a1 + a2
  std::array<double, 3> b{};        // signed arm offsets
  std::array<double, 3> modulus{};  // a_k / sin(alpha_k)
  BarLayout layout{};
};

struct SphericalSymmetry {
  std::array<SpherePoint, 6> centers;
  OrientedGreatCircle n;
  SpherePoint N;
  OrientedGreatCircle t1, t2;
};

struct EightBarPose {
  double phi1 = 0.0, phi2 = 0.0, phi3 = 0.0;
  std::array<OrientedGreatCircle, 4> g, h;
  std::array<SpherePoint, kJointCount> joints;
  bool collapsed = false;
  std::optional<SphericalSymmetry> symmetry;  // absent in aligned poses
  double closure_residual = 0.0;

  const SpherePoint& R(int i, int j) const { return joints[joint_index(i, j)]; }
};

struct SpatialSymmetry {
  std::array<OrientedLine, 6> axes;
  OrientedLine n;
  OrientedLine t;
};

struct SpatialEightBarPose {
  double phi1 = 0.0, phi2 = 0.0, phi3 = 0.0;
  std::array<OrientedLine, 4> g, h;
  std::array<OrientedLine, kJointCount> hinges;
  bool collapsed = false;
  std::optional<SpatialSymmetry> symmetry;
  double closure_residual = 0.0;

  const OrientedLine& I(int i, int j) const { return hinges[joint_index(i, j)]; }
  // Intersection of g_i and h_j on the hinge.
  Vec3 vertex(int i, int j) const;
};

struct Residual {
  std::string family;
  std::string name;
  double value = 0.0;
};

struct Report {
  std::vector<Residual> entries;

  void add(std::string family, std::string name, double value);
  double worst() const;
  double worst(std::string_view family) const;  // 0 when the family is empty
};

inline constexpr double kAssemblyTol = 1e-9;

EightBarGeometry validate_spec(const EightBarSpec& spec);
SpatialEightBarGeometry validate_spec(const SpatialEightBarSpec& spec);

// Third-isogram data (beta3, branch3) realizing c31 = c32 * c21, sorted with
// the plus branch first and by increasing beta3.
std::vector<std::pair<double, Branch>> third_isogram_candidates(double alpha3, double c31);

// Fills beta3/branch3 (and for the spatial spec any missing offset) with
// the first feasible choice; supplied values are kept and validated.
EightBarSpec derive_spec(const EightBarSpec& spec);
SpatialEightBarSpec derive_spec(const SpatialEightBarSpec& spec);

EightBarPose assemble_spherical(const EightBarGeometry& geom, double phi1);
SpatialEightBarPose assemble_spatial(const SpatialEightBarGeometry& geom, double phi1);

// Family "closure": incidences and joint positions along every bar.
// Family "cells": opposite sides of each cell agree (and, in space, the
// offset proportion of each cell).
Report closure_report(const EightBarGeometry& geom, const EightBarPose& pose);
Report closure_report(const SpatialEightBarGeometry& geom, const SpatialEightBarPose& pose);

// Families: alignment, products, rotation_table, bisector_symmetry, center_circle.
Report halfturn_products_report(const EightBarPose& pose);
// Families: alignment, products, rotation_table, common_perpendicular, axis_symmetry, cohorts.
Report symmetry_report_spatial(const SpatialEightBarPose& pose);

// Loop-closure model of the cube linkgraph for the oracle: one loop per cell,
// with twists (and offsets) read from the bar layout.
oracle::LoopSystem closure_system(const BarLayout& layout, bool spatial);
std::vector<double> joint_angles(const EightBarPose& pose);
std::vector<double> joint_angles(const SpatialEightBarPose& pose);

// Single-cell models. Joint order A, B, C, D; A is driving at angle -phi1.
oracle::LoopProblem spherical_isogram_loop(const SphericalIsogramSpec& spec, const SphericalIsogramPose& pose);
oracle::LoopProblem bennett_isogram_loop(const BennettIsogramSpec& spec, const BennettIsogramPose& pose);
std::vector<double> isogram_joint_angles(const SphericalIsogramPose& pose);
std::vector<double> isogram_joint_angles(const BennettIsogramPose& pose);

struct MobilitySample {
  double phi1 = 0.0;
  int nullity = -1;
  double residual = 0.0;
  std::string status;  // "ok" or a diagnostic
};

std::vector<MobilitySample> mobility_check(const EightBarGeometry& geom, const std::vector<double>& phi_samples);
std::vector<MobilitySample> mobility_check(const SpatialEightBarGeometry& geom, const std::vector<double>& phi_samples);

enum class SweepSpacing { HalfAngleTangent, UniformAngle };

// N angles from `from` to `to` inclusive. Tangent spacing is uniform in
// tan(phi / 2) on ranges inside (-pi, pi) and uniform in tan((phi - mid) / 4)
// otherwise, which stays finite through phi = pi.
std::vector<double> sweep_angles(double from, double to, int n, SweepSpacing spacing);

template <class Pose>
struct SweepSample {
  double phi1 = 0.0;
  std::optional<Pose> pose;
  std::vector<double> family_max;  // aligned with sweep_families(); NaN when not applicable
  std::string error;
};

std::vector<std::string> sweep_families(bool spatial);

// Samples are independent and may be computed concurrently; output order
// equals input order. threads = 0 picks the hardware concurrency.
std::vector<SweepSample<EightBarPose>> sweep(const EightBarGeometry& geom, const std::vector<double>& phis,
                                             unsigned threads = 0);
std::vector<SweepSample<SpatialEightBarPose>> sweep(const SpatialEightBarGeometry& geom,
                                                    const std::vector<double>& phis, unsigned threads = 0);

}  // namespace bennett8
