#pragma once

#include <cmath>

namespace bennett8 {

// Dual number re + eps * du with eps^2 = 0.
struct Dual {
  double re = 0.0;
  double du = 0.0;
};

inline Dual operator+(Dual a, Dual b) { return {a.re + b.re, a.du + b.du}; }
inline Dual operator-(Dual a, Dual b) { return {a.re - b.re, a.du - b.du}; }
inline Dual operator-(Dual a) { return {-a.re, -a.du}; }
inline Dual operator*(Dual a, Dual b) { return {a.re * b.re, a.re * b.du + a.du * b.re}; }
inline Dual operator/(Dual a, Dual b) { return {a.re / b.re, (a.du * b.re - a.re * b.du) / (b.re * b.re)}; }
inline Dual sin(Dual a) { return {std::sin(a.re), a.du * std::cos(a.re)}; }
inline Dual cos(Dual a) { return {std::cos(a.re), -a.du * std::sin(a.re)}; }

inline double real_part(double x) { return x; }
inline double real_part(Dual x) { return x.re; }

}  // namespace bennett8
