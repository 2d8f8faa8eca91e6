#pragma once

// Error-free transformations and a small value/tail ("double-double") type.
//
// The inversion identities in this library are advertised to round-trip at
// 1e-12 relative error over the whole parameter range, including serial
// fractions near 1e-7 at processor counts near 1e7.  A bare double cannot
// carry enough information through expressions like E*N - 1 in that regime
// (the interesting part sits below one ulp of E), so the law formulas run on
// value/tail pairs and the result types keep the tail.

#include <cmath>

namespace parascale::detail {

struct dd {
  double hi = 0.0;
  double lo = 0.0;
};

// Requires |a| >= |b| or a == 0.
inline dd quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline dd two_sum(double a, double b) {
  double s = a + b;
  double v = s - a;
  return {s, (a - (s - v)) + (b - v)};
}

inline dd two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline dd renorm(double hi, double lo) { return quick_two_sum(hi, lo); }

inline dd add(dd a, double b) {
  dd s = two_sum(a.hi, b);
  return renorm(s.hi, s.lo + a.lo);
}

inline dd add(dd a, dd b) {
  dd s = two_sum(a.hi, b.hi);
  return renorm(s.hi, s.lo + (a.lo + b.lo));
}

inline dd sub(dd a, dd b) { return add(a, dd{-b.hi, -b.lo}); }

inline dd mul(dd a, double b) {
  dd p = two_prod(a.hi, b);
  return renorm(p.hi, p.lo + a.lo * b);
}

inline dd mul(dd a, dd b) {
  dd p = two_prod(a.hi, b.hi);
  return renorm(p.hi, p.lo + (a.hi * b.lo + a.lo * b.hi));
}

inline dd div(dd a, dd b) {
  double q1 = a.hi / b.hi;
  dd r = sub(a, mul(b, q1));
  double q2 = (r.hi + r.lo) / b.hi;
  return renorm(q1, q2);
}

inline dd div(double a, dd b) { return div(dd{a, 0.0}, b); }

// 1 - x with the part the leading double drops kept in the tail.  Exact.
inline dd one_minus(double x) { return two_sum(1.0, -x); }

inline double collapse(dd a) { return a.hi + a.lo; }

// a < b on the represented real values (pairs are normalized).
inline bool less(dd a, dd b) {
  return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}

inline bool less(dd a, double b) { return less(a, dd{b, 0.0}); }
inline bool greater(dd a, double b) { return less(dd{b, 0.0}, a); }

}  // namespace parascale::detail
