#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "bennett8/errors.hpp"
#include "linkage_internal.hpp"

namespace bennett8 {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCompatibilityTol = 1e-10;
constexpr double kLayoutAgreementTol = 1e-8;
constexpr double kDistinctArmTol = 1e-6;
constexpr double kProportionTol = 1e-9;
constexpr double kReferenceAngles[] = {2.0, 1.2, 2.5, 0.7, -1.5, -2.3};

[[noreturn]] void invalid(const std::string& message, const std::string& constraint) {
  throw Error(ErrorCode::InvalidSpec, message, constraint);
}

void require_finite(double x, const char* name) {
  if (!std::isfinite(x)) invalid(std::string(name) + " must be finite", std::string(name) + " finite");
}

void require_arc(double x, const char* name) {
  require_finite(x, name);
  if (!(x > 0.0 && x < kPi)) invalid(std::string(name) + " must lie in (0, pi)", std::string(name) + " in (0, pi)");
}

double cell_coefficient(double alpha, double beta, Branch branch, int cell) {
  const std::string tag = "isogram " + std::to_string(cell);
  double c = 0.0;
  try {
    c = transmission_coefficient({alpha, beta, branch});
  } catch (const Error& e) {
    invalid(tag + ": " + e.what(), tag + " denominator");
  }
  if (std::abs(c) < 1e-9) {
    invalid(tag + " does not transmit motion (alpha = beta on the plus branch)", tag + " nonzero transmission");
  }
  return c;
}

// Angular checks and coefficients shared by validation and derivation.
EightBarGeometry driving_geometry(const EightBarSpec& spec) {
  require_finite(spec.u1, "u1");
  require_finite(spec.u2, "u2");
  require_finite(spec.u3, "u3");
  if (!(spec.u1 < spec.u2 && spec.u2 < spec.u3)) invalid("basis joints must satisfy u1 < u2 < u3", "u1 < u2 < u3");
  EightBarGeometry g;
  g.spec = spec;
  g.u = {spec.u1, spec.u2, spec.u3};
  g.alpha = {spec.u2 - spec.u1, spec.u3 - spec.u2, spec.u3 - spec.u1};
  require_arc(g.alpha[0], "alpha1");
  require_arc(g.alpha[1], "alpha2");
  if (!(g.alpha[2] < kPi)) invalid("alpha1 + alpha2 must stay below pi", "alpha1 + alpha2 < pi");
  require_arc(spec.beta1, "beta1");
  require_arc(spec.beta2, "beta2");
  g.beta[0] = spec.beta1;
  g.beta[1] = spec.beta2;
  g.branch[0] = spec.branch1;
  g.branch[1] = spec.branch2;
  g.c21 = cell_coefficient(g.alpha[0], g.beta[0], g.branch[0], 1);
  g.c32 = cell_coefficient(g.alpha[1], g.beta[1], g.branch[1], 2);
  g.c31 = g.c32 * g.c21;
  return g;
}

template <class Geometry>
BarLayout completed_layout(const Geometry& geom) {
  std::vector<BarLayout> found;
  for (double ref : kReferenceAngles) {
    std::optional<BarLayout> layout;
    try {
      layout = detail::reference_layout(geom, ref);
    } catch (const Error& e) {
      invalid(std::string("the driving isograms do not close the linkage: ") + e.what(), "isogram 3 compatibility");
    }
    if (layout) found.push_back(*layout);
    if (found.size() == 2) break;
  }
  if (found.size() < 2) invalid("no well-conditioned reference pose for cells 4 to 6", "reference pose");
  const double diff = detail::layout_difference(found[0], found[1]);
  if (!(diff < kLayoutAgreementTol)) {
    invalid("cells 4 to 6 change shape along the motion (layout drift " + std::to_string(diff) + ")",
            "cells 4 to 6 are isograms");
  }
  return found[0];
}

}  // namespace

std::vector<std::pair<double, Branch>> third_isogram_candidates(double alpha3, double c31) {
  std::vector<std::pair<double, Branch>> out;
  if (!(alpha3 > 0.0 && alpha3 < kPi) || !std::isfinite(c31)) return out;
  const double sa = std::sin(alpha3), ca = std::cos(alpha3);
  for (Branch br : {Branch::Plus, Branch::Minus}) {
    // Clearing the denominator of the transmission law gives
    // sin(alpha) cos(beta) + (c - cos(alpha)) sin(beta) = r.
    const double P = sa;
    const double Q = c31 - ca;
    const double r = br == Branch::Minus ? c31 * sa : -c31 * sa;
    const double rho = std::hypot(P, Q);
    if (std::abs(r) > rho) continue;
    const double spread = std::acos(std::clamp(r / rho, -1.0, 1.0));
    const double phase = std::atan2(Q, P);
    std::vector<double> roots;
    for (double beta : {phase + spread, phase - spread}) {
      beta = wrap_angle(beta);
      if (!(beta > 1e-9 && beta < kPi - 1e-9)) continue;
      double c = 0.0;
      try {
        c = transmission_coefficient({alpha3, beta, br});
      } catch (const Error&) {
        continue;
      }
      if (std::abs(c - c31) > 1e-9 * std::max(1.0, std::abs(c31))) continue;
      if (std::none_of(roots.begin(), roots.end(), [&](double x) { return std::abs(x - beta) < 1e-12; })) {
        roots.push_back(beta);
      }
    }
    std::sort(roots.begin(), roots.end());
    for (double beta : roots) out.emplace_back(beta, br);
  }
  return out;
}

EightBarGeometry validate_spec(const EightBarSpec& spec) {
  EightBarGeometry g = driving_geometry(spec);
  if (!spec.beta3 || !spec.branch3) {
    invalid("beta3 and branch3 are required (derive fills them in)", "beta3 present");
  }
  require_arc(*spec.beta3, "beta3");
  g.beta[2] = *spec.beta3;
  g.branch[2] = *spec.branch3;
  const double c3 = cell_coefficient(g.alpha[2], g.beta[2], g.branch[2], 3);
  if (std::abs(c3 - g.c31) > kCompatibilityTol * std::max(1.0, std::abs(g.c31))) {
    invalid("isogram 3 transmits " + std::to_string(c3) + " but the driving isograms need c31 = c32 * c21 = " +
                std::to_string(g.c31),
            "isogram 3 compatibility c31 = c32 * c21");
  }
  if (std::abs(g.beta[0] - g.beta[2]) < kDistinctArmTol) {
    invalid("beta1 and beta3 coincide, so the tips on h1 merge", "beta1 != beta3");
  }
  if (std::abs(g.beta[0] - g.beta[1]) < kDistinctArmTol) {
    invalid("beta1 and beta2 coincide, so the tips on h2 merge", "beta1 != beta2");
  }
  if (std::abs(g.beta[1] - g.beta[2]) < kDistinctArmTol) {
    invalid("beta2 and beta3 coincide, so the tips on h3 merge", "beta2 != beta3");
  }
  detail::set_driving_slots(g.layout, g.alpha, g.beta, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0});
  g.layout = completed_layout(g);
  return g;
}

SpatialEightBarGeometry validate_spec(const SpatialEightBarSpec& spec) {
  SpatialEightBarGeometry g;
  g.angular = validate_spec(spec.angular);
  require_finite(spec.a1, "a1");
  require_finite(spec.a2, "a2");
  if (!(spec.a1 > 0.0)) invalid("a1 must be positive", "a1 > 0");
  if (!(spec.a2 > 0.0)) invalid("a2 must be positive", "a2 > 0");
  g.a = {spec.a1, spec.a2, spec.a1 + spec.a2};
  const std::array<std::optional<double>, 3> supplied = {spec.b1, spec.b2, spec.b3};
  for (int k = 0; k < 3; ++k) {
    const double alpha = g.angular.alpha[k];
    const double beta = g.angular.beta[k];
    const Branch br = g.angular.branch[k];
    g.modulus[k] = g.a[k] / std::sin(alpha);
    g.b[k] = bennett_offset(alpha, beta, g.a[k], br);
    if (supplied[k]) {
      const std::string tag = "isogram " + std::to_string(k + 1);
      require_finite(*supplied[k], "b");
      const BennettIsogramSpec cell{alpha, beta, g.a[k], *supplied[k], br};
      if (bennett_proportion_residual(cell) > kProportionTol) {
        invalid(tag + " offsets violate a sin(beta) = " + std::string(br == Branch::Plus ? "" : "-") +
                    "b sin(alpha): expected b = " + std::to_string(g.b[k]),
                tag + " proportion");
      }
      g.b[k] = *supplied[k];
    }
  }
  g.spec = spec;
  g.spec.b1 = g.b[0];
  g.spec.b2 = g.b[1];
  g.spec.b3 = g.b[2];
  detail::set_driving_slots(g.layout, g.angular.alpha, g.angular.beta, g.a, g.b);
  g.layout = completed_layout(g);
  return g;
}

EightBarSpec derive_spec(const EightBarSpec& spec) {
  if (spec.beta3 && spec.branch3) {
    validate_spec(spec);
    return spec;
  }
  const EightBarGeometry g = driving_geometry(spec);
  // Every candidate failing for the same reason surfaces that reason.
  std::optional<Error> last_error;
  for (const auto& [beta, branch] : third_isogram_candidates(g.alpha[2], g.c31)) {
    if (spec.branch3 && *spec.branch3 != branch) continue;
    if (spec.beta3 && std::abs(*spec.beta3 - beta) > 1e-9) continue;
    EightBarSpec out = spec;
    out.beta3 = spec.beta3 ? *spec.beta3 : beta;
    out.branch3 = branch;
    try {
      validate_spec(out);
      return out;
    } catch (const Error& e) {
      last_error = e;
    }
  }
  if (last_error) throw *last_error;
  invalid("no third isogram realizes c31 = c32 * c21", "isogram 3 compatibility");
}

SpatialEightBarSpec derive_spec(const SpatialEightBarSpec& spec) {
  SpatialEightBarSpec out = spec;
  out.angular = derive_spec(spec.angular);
  return validate_spec(out).spec;
}

}  // namespace bennett8
