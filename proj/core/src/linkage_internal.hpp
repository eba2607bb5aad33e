#pragma once

#include <array>
#include <optional>

#include "bennett8/linkage.hpp"

namespace bennett8::detail {

// Slots on g0 and the arms h1..h3, fixed by the driving data. The slots of
// g1..g3 and h0 come from the reference construction.
void set_driving_slots(BarLayout& layout, const std::array<double, 3>& alpha, const std::array<double, 3>& beta,
                       const std::array<double, 3>& a, const std::array<double, 3>& b);

const BarSlot& slot(const BarLayout& layout, int bar, int joint);

// g0, h1..h3, the basis joints and the six arm tips.
void place_driving(const EightBarGeometry& geom, EightBarPose& pose);
void place_driving(const SpatialEightBarGeometry& geom, SpatialEightBarPose& pose);

// Layout of g1..g3 and h0 read off the half-turn construction at phi_ref.
// Returns nullopt when that construction is ill-conditioned at phi_ref.
std::optional<BarLayout> reference_layout(const EightBarGeometry& geom, double phi_ref);
std::optional<BarLayout> reference_layout(const SpatialEightBarGeometry& geom, double phi_ref);

double layout_difference(const BarLayout& a, const BarLayout& b);

// Symmetry elements from the current circles or lines; nullopt if any
// center or axis is undefined.
std::optional<SphericalSymmetry> spherical_symmetry(const EightBarPose& pose);
std::optional<SpatialSymmetry> spatial_symmetry(const SpatialEightBarPose& pose);

// Center pairs in cell order: (h1, h2), (h2, h3), (h3, h1), (g1, g2), (g2, g3), (g3, g1).
inline constexpr std::array<std::array<int, 2>, 6> kCenterPairs = {{
    {5, 6},
    {6, 7},
    {7, 5},
    {1, 2},
    {2, 3},
    {3, 1},
}};

inline const OrientedGreatCircle& bar_circle(const EightBarPose& p, int bar) {
  return bar < 4 ? p.g[bar] : p.h[bar - 4];
}
inline const OrientedLine& bar_line(const SpatialEightBarPose& p, int bar) {
  return bar < 4 ? p.g[bar] : p.h[bar - 4];
}

Vec3 line_tie_break_direction(const Vec3& d);
OrientedLine tie_broken(const OrientedLine& l);

}  // namespace bennett8::detail
