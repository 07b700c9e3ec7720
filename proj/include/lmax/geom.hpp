#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

#include "lmax/dyadic.hpp"

namespace lmax {

constexpr int kMaxDim = 3;

struct Point {
  int n = 0;
  std::array<Dyadic, kMaxDim> x{};

  static Point of(int n, std::array<Dyadic, kMaxDim> coords) {
    if (n < 1 || n > kMaxDim) throw std::invalid_argument("point: dimension must be 1..3");
    return Point{n, coords};
  }
};

inline Dyadic dist_inf(const Point& a, const Point& b) {
  if (a.n != b.n) throw std::invalid_argument("dist_inf: dimension mismatch");
  Dyadic d;
  for (int i = 0; i < a.n; ++i) {
    Dyadic g = (a.x[i] - b.x[i]).abs();
    if (g > d) d = g;
  }
  return d;
}

/// Axis-parallel cube by center and half-side (closed point set).
struct Cube {
  Point center;
  Dyadic half;

  Dyadic lo(int i) const { return center.x[i] - half; }
  Dyadic hi(int i) const { return center.x[i] + half; }
  int dim() const { return center.n; }

  Cube dilated(long long k) const { return Cube{center, half.mul_ll(k)}; }
  Cube scaled(const Rational& r) const {
    // exact only when r.den is a power of two times divisors of the mantissa;
    // used for alpha/beta shrink with dyadic-compatible ratios.
    Dyadic h = half.mul_ll(r.num);
    // division by den: only exact for den = 2^k
    long long d = r.den;
    int k = 0;
    while ((d & 1) == 0) {
      d >>= 1;
      ++k;
    }
    if (d != 1) throw std::invalid_argument("cube scale: denominator must be a power of two");
    return Cube{center, h.div_pow2(k)};
  }

  bool contains(const Point& p) const { return !(dist_inf(center, p) > half); }
};

/// d_inf from a point to a closed cube (0 inside).
inline Dyadic dist_point_cube(const Point& p, const Cube& q) {
  Dyadic d;
  for (int i = 0; i < p.n; ++i) {
    Dyadic g = (p.x[i] - q.center.x[i]).abs() - q.half;
    if (g > d) d = g;
  }
  return d;  // clamped at 0 by construction (d starts at 0)
}

inline bool cubes_meet(const Cube& a, const Cube& b) {
  return !(dist_inf(a.center, b.center) > a.half + b.half);
}

/// Interval [lo,hi] per axis, with optional infinite extents; complement
/// components of every domain kind are finite unions of these.
struct IBox {
  int n = 0;
  std::array<Dyadic, kMaxDim> lo{}, hi{};
  std::array<bool, kMaxDim> lo_inf{}, hi_inf{};

  static IBox all(int n) {
    IBox b;
    b.n = n;
    for (int i = 0; i < n; ++i) b.lo_inf[i] = b.hi_inf[i] = true;
    return b;
  }
  static IBox point(const Point& p) {
    IBox b;
    b.n = p.n;
    b.lo = b.hi = p.x;
    return b;
  }
};

/// Per-axis distance from a coordinate to an interval (0 inside).
inline Dyadic axis_gap(const Dyadic& t, const IBox& b, int i) {
  Dyadic g;
  if (!b.lo_inf[i] && t < b.lo[i]) g = b.lo[i] - t;
  if (!b.hi_inf[i] && t > b.hi[i]) {
    Dyadic g2 = t - b.hi[i];
    if (g2 > g) g = g2;
  }
  return g;
}

inline Dyadic dist_point_ibox(const Point& p, const IBox& b) {
  Dyadic d;
  for (int i = 0; i < p.n; ++i) {
    Dyadic g = axis_gap(p.x[i], b, i);
    if (g > d) d = g;
  }
  return d;
}

/// Exact min over a closed box [blo,bhi] of d_inf(., B): per-axis
/// interval-to-interval gaps, max over axes.
inline Dyadic dist_box_ibox(const std::array<Dyadic, kMaxDim>& blo,
                            const std::array<Dyadic, kMaxDim>& bhi, const IBox& b, int n) {
  Dyadic d;
  for (int i = 0; i < n; ++i) {
    Dyadic g;
    if (!b.lo_inf[i] && bhi[i] < b.lo[i]) g = b.lo[i] - bhi[i];
    if (!b.hi_inf[i] && blo[i] > b.hi[i]) {
      Dyadic g2 = blo[i] - b.hi[i];
      if (g2 > g) g = g2;
    }
    if (g > d) d = g;
  }
  return d;
}

/// Exact max over a closed box of d_inf(., B): per-axis farthest endpoint.
inline Dyadic max_dist_box_ibox(const std::array<Dyadic, kMaxDim>& blo,
                                const std::array<Dyadic, kMaxDim>& bhi, const IBox& b, int n) {
  Dyadic d;
  for (int i = 0; i < n; ++i) {
    Dyadic g = axis_gap(blo[i], b, i);
    Dyadic g2 = axis_gap(bhi[i], b, i);
    if (g2 > g) g = g2;
    if (g > d) d = g;
  }
  return d;
}

}  // namespace lmax
