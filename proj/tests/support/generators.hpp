#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>

#include "bennett8/errors.hpp"
#include "bennett8/isogram.hpp"
#include "bennett8/linkage.hpp"
#include "bennett8/screw_geom.hpp"
#include "bennett8/sphere_geom.hpp"

namespace bennett8::testing {

inline constexpr double kPi = std::numbers::pi;

// Seeded random inputs for property tests. Every draw is reproducible from
// the seed, so a failing case can be replayed.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  Vec3 unit_vector() {
    std::normal_distribution<double> n(0.0, 1.0);
    for (;;) {
      const Vec3 v(n(rng_), n(rng_), n(rng_));
      if (v.norm() > 1e-3) return v.normalized();
    }
  }

  Vec3 vector(double extent) { return Vec3(uniform(-extent, extent), uniform(-extent, extent), uniform(-extent, extent)); }

  SpherePoint point() { return SpherePoint(unit_vector()); }
  OrientedGreatCircle circle() { return OrientedGreatCircle(unit_vector()); }

  // Two circles whose planes differ by a clear margin.
  std::pair<OrientedGreatCircle, OrientedGreatCircle> circle_pair(double min_cross = 1e-3) {
    for (;;) {
      const OrientedGreatCircle a = circle(), b = circle();
      if (a.n().cross(b.n()).norm() > min_cross) return {a, b};
    }
  }

  OrientedLine line(double extent = 3.0) { return OrientedLine::through(vector(extent), unit_vector()); }

  std::pair<OrientedLine, OrientedLine> skew_pair(double min_cross = 1e-3) {
    for (;;) {
      const OrientedLine a = line(), b = line();
      if (a.d().cross(b.d()).norm() > min_cross) return {a, b};
    }
  }

  Displacement displacement() {
    return Displacement::screw(line(), uniform(-kPi, kPi), uniform(-2.0, 2.0));
  }

  Branch branch() { return coin() ? Branch::Plus : Branch::Minus; }

  // Driving angle away from the aligned poses at 0 and pi.
  double regular_angle(double margin = 0.25) {
    const double mag = uniform(margin, kPi - margin);
    return coin() ? mag : -mag;
  }

  // Spherical isogram with a well-conditioned denominator and coefficient.
  SphericalIsogramSpec isogram_spec() {
    for (;;) {
      SphericalIsogramSpec s{uniform(0.15, kPi - 0.15), uniform(0.15, kPi - 0.15), branch()};
      const double den = s.branch == Branch::Plus ? std::sin(s.alpha) + std::sin(s.beta)
                                                  : std::sin(s.alpha) - std::sin(s.beta);
      if (std::abs(den) < 0.05 || std::abs(s.alpha - s.beta) < 0.05) continue;
      const double c = transmission_coefficient(s);
      if (std::abs(c) > 0.02 && std::abs(c) < 50.0) return s;
    }
  }

  BennettIsogramSpec bennett_spec() {
    const SphericalIsogramSpec s = isogram_spec();
    const double a = uniform(0.2, 3.0);
    return {s.alpha, s.beta, a, bennett_offset(s.alpha, s.beta, a, s.branch), s.branch};
  }

  // Random driving data for an eight-bar; the third isogram is derived.
  // Returns nullopt when no feasible, well-conditioned completion exists.
  std::optional<EightBarGeometry> try_eight_bar() {
    EightBarSpec s;
    s.u1 = uniform(-0.5, 0.5);
    s.u2 = s.u1 + uniform(0.3, 1.3);
    s.u3 = s.u2 + uniform(0.3, 1.3);
    if (s.u3 - s.u1 > kPi - 0.3) return std::nullopt;
    s.beta1 = uniform(0.3, kPi - 0.3);
    s.beta2 = uniform(0.3, kPi - 0.3);
    s.branch1 = branch();
    s.branch2 = branch();
    try {
      const EightBarGeometry g = validate_spec(derive_spec(s));
      for (double c : {g.c21, g.c32, g.c31}) {
        if (!(std::abs(c) > 0.05 && std::abs(c) < 20.0)) return std::nullopt;
      }
      if (std::abs(g.beta[2] - g.beta[0]) < 0.1 || std::abs(g.beta[2] - g.beta[1]) < 0.1 ||
          std::abs(g.beta[0] - g.beta[1]) < 0.1) {
        return std::nullopt;
      }
      return g;
    } catch (const Error&) {
      return std::nullopt;
    }
  }

  EightBarGeometry eight_bar() {
    for (;;) {
      if (auto g = try_eight_bar()) return *g;
    }
  }

  SpatialEightBarGeometry spatial_eight_bar() {
    for (;;) {
      const EightBarGeometry g = eight_bar();
      SpatialEightBarSpec s;
      s.angular = g.spec;
      s.a1 = uniform(0.3, 2.0);
      s.a2 = uniform(0.3, 2.0);
      try {
        return validate_spec(s);
      } catch (const Error&) {
      }
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace bennett8::testing
