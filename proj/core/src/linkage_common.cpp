#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "bennett8/errors.hpp"
#include "linkage_internal.hpp"

namespace bennett8 {

int joint_index(int i, int j) {
  if (i < 0 || i > 3 || j < 0 || j > 3 || i == j) throw std::out_of_range("joint (i, j) needs 0 <= i != j <= 3");
  return 3 * i + (j < i ? j : j - 1);
}

std::pair<int, int> joint_pair(int index) {
  if (index < 0 || index >= kJointCount) throw std::out_of_range("joint index out of range");
  const int i = index / 3;
  int j = index % 3;
  if (j >= i) ++j;
  return {i, j};
}

std::string joint_label(char prefix, int index) {
  const auto [i, j] = joint_pair(index);
  std::string s(1, prefix);
  s += static_cast<char>('0' + i);
  s += static_cast<char>('0' + j);
  return s;
}

std::string bar_label(int bar) {
  if (bar < 0 || bar >= kBarCount) throw std::out_of_range("bar index out of range");
  std::string s(1, bar < 4 ? 'g' : 'h');
  s += static_cast<char>('0' + bar % 4);
  return s;
}

Vec3 SpatialEightBarPose::vertex(int i, int j) const { return closest_point(I(i, j), g[i]); }

void Report::add(std::string family, std::string name, double value) {
  entries.push_back({std::move(family), std::move(name), value});
}

double Report::worst() const {
  double w = 0.0;
  for (const Residual& r : entries) {
    if (std::isnan(r.value)) return r.value;
    w = std::max(w, r.value);
  }
  return w;
}

double Report::worst(std::string_view family) const {
  double w = 0.0;
  for (const Residual& r : entries) {
    if (r.family != family) continue;
    if (std::isnan(r.value)) return r.value;
    w = std::max(w, r.value);
  }
  return w;
}

std::vector<double> sweep_angles(double from, double to, int n, SweepSpacing spacing) {
  if (n < 2) throw std::invalid_argument("a sweep needs at least two samples");
  if (!std::isfinite(from) || !std::isfinite(to)) throw std::invalid_argument("sweep bounds must be finite");
  constexpr double pi = std::numbers::pi;
  std::vector<double> out(static_cast<size_t>(n));
  const double last = n - 1;
  const double mid = 0.5 * (from + to);
  const double half = 0.5 * (to - from);
  if (spacing == SweepSpacing::UniformAngle || std::abs(half) >= 2.0 * pi) {
    for (int k = 0; k < n; ++k) out[k] = from + (to - from) * (k / last);
  } else if (from > -pi && from < pi && to > -pi && to < pi) {
    const double t0 = std::tan(0.5 * from), t1 = std::tan(0.5 * to);
    for (int k = 0; k < n; ++k) out[k] = 2.0 * std::atan(t0 + (t1 - t0) * (k / last));
  } else {
    const double s = std::tan(0.25 * half);
    for (int k = 0; k < n; ++k) out[k] = mid + 4.0 * std::atan(-s + 2.0 * s * (k / last));
  }
  out.front() = from;
  out.back() = to;
  return out;
}

std::vector<std::string> sweep_families(bool spatial) {
  if (spatial) {
    return {"closure", "cells", "alignment", "products", "rotation_table", "common_perpendicular", "axis_symmetry",
            "cohorts"};
  }
  return {"closure", "cells", "alignment", "products", "rotation_table", "bisector_symmetry", "center_circle"};
}

namespace detail {

const BarSlot& slot(const BarLayout& layout, int bar, int joint) {
  for (const BarSlot& s : layout[bar]) {
    if (s.joint == joint) return s;
  }
  throw std::logic_error("joint " + joint_label('R', joint) + " is not on bar " + bar_label(bar));
}

void set_driving_slots(BarLayout& layout, const std::array<double, 3>& alpha, const std::array<double, 3>& beta,
                       const std::array<double, 3>& a, const std::array<double, 3>& b) {
  // g0 carries R01, R02, R03 at 0, alpha1, alpha1 + alpha2.
  layout[g_bar(0)] = {{{joint_index(0, 1), 0.0, 0.0},
                       {joint_index(0, 2), alpha[0], a[0]},
                       {joint_index(0, 3), alpha[2], a[2]}}};
  // Arm tips hang back from the basis joints by the arm arc of each cell:
  // h1 by beta1 (cell 1) and beta3 (cell 3), h2 by beta1 and beta2, h3 by beta2 and beta3.
  layout[h_bar(1)] = {{{joint_index(0, 1), 0.0, 0.0},
                       {joint_index(3, 1), -beta[0], -b[0]},
                       {joint_index(2, 1), -beta[2], -b[2]}}};
  layout[h_bar(2)] = {{{joint_index(0, 2), 0.0, 0.0},
                       {joint_index(3, 2), -beta[0], -b[0]},
                       {joint_index(1, 2), -beta[1], -b[1]}}};
  layout[h_bar(3)] = {{{joint_index(0, 3), 0.0, 0.0},
                       {joint_index(1, 3), -beta[1], -b[1]},
                       {joint_index(2, 3), -beta[2], -b[2]}}};
}

double layout_difference(const BarLayout& x, const BarLayout& y) {
  double worst = 0.0;
  for (int bar = 0; bar < kBarCount; ++bar) {
    for (int k = 0; k < 3; ++k) {
      if (x[bar][k].joint != y[bar][k].joint) return std::numeric_limits<double>::infinity();
      // A joint may be represented by either end of its axis; compare angles modulo pi.
      worst = std::max({worst, std::abs(std::remainder(x[bar][k].angle - y[bar][k].angle, std::numbers::pi)),
                        std::abs(x[bar][k].offset - y[bar][k].offset)});
    }
  }
  return worst;
}

Vec3 line_tie_break_direction(const Vec3& d) { return tie_break(d); }

OrientedLine tie_broken(const OrientedLine& l) {
  return tie_break(l.d()).dot(l.d()) > 0.0 ? l : l.reversed();
}

}  // namespace detail

}  // namespace bennett8
