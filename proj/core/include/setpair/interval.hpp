#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "setpair/geometry.hpp"

namespace setpair {

/// Scalar interval for enclosure arithmetic over boxes.  Desk-scale use:
/// rounding is not outward-directed, comparisons downstream carry slack.
struct Iv {
  double lo = 0.0;
  double hi = 0.0;

  static Iv point(double v) { return {v, v}; }
  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  /// Largest absolute value attained on the interval.
  double mag() const { return std::max(std::abs(lo), std::abs(hi)); }
  /// Smallest absolute value attained on the interval.
  double mig() const {
    if (lo <= 0.0 && hi >= 0.0) return 0.0;
    return std::min(std::abs(lo), std::abs(hi));
  }
};

inline Iv operator+(Iv a, Iv b) { return {a.lo + b.lo, a.hi + b.hi}; }
inline Iv operator-(Iv a, Iv b) { return {a.lo - b.hi, a.hi - b.lo}; }
inline Iv operator+(Iv a, double s) { return {a.lo + s, a.hi + s}; }

inline Iv operator*(double s, Iv a) {
  return s >= 0.0 ? Iv{s * a.lo, s * a.hi} : Iv{s * a.hi, s * a.lo};
}

inline Iv operator*(Iv a, Iv b) {
  const double c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {std::min({c[0], c[1], c[2], c[3]}), std::max({c[0], c[1], c[2], c[3]})};
}

inline Iv hull(Iv a, Iv b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

inline Iv iv_max0(Iv a) { return {std::max(0.0, a.lo), std::max(0.0, a.hi)}; }

/// Axis-aligned interval box in R^d.
using IvVec = std::vector<Iv>;

IvVec to_ivec(const Box& b);
IvVec to_ivec(const Point& p);

/// Interval enclosure of ||x - y|| over an interval box.
Iv iv_norm(const IvVec& x, NormKind kind);
Iv iv_distance(const IvVec& x, const IvVec& y, NormKind kind);

}  // namespace setpair
