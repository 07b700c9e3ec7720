#pragma once

#include <functional>
#include <vector>

#include "lmax/domain.hpp"

namespace lmax {

/// Parameters of the family F_beta of cubes well inside the domain.
struct FamilyParams {
  Rational beta;
  Dyadic eps_strict;  // only for user-supplied float inputs; default 0

  explicit FamilyParams(Rational b, Dyadic eps = Dyadic(0)) : beta(b), eps_strict(eps) {
    if (!(Rational(0, 1) < beta) || !(beta < Rational(1, 1)))
      throw std::invalid_argument("family: beta must be in (0,1)");
  }
};

/// Membership is strict: l + eps < beta * d(center), center in Omega.
/// A center outside Omega yields false, not an error.
inline bool in_family(const Cube& q, const FamilyParams& fp, const Domain& dom) {
  Dyadic d = dom.distance_unchecked(q.center);
  if (d.sign() <= 0) return false;
  return less_than_scaled(q.half + fp.eps_strict, fp.beta, d);
}

inline bool in_family(const Cube& q, const Rational& beta, const Domain& dom) {
  return in_family(q, FamilyParams(beta), dom);
}

/// Cell-range cube: per-axis offset a (cells) and common width w (cells).
/// Point set [lo + a*h, lo + (a+w)*h] per axis; corners on the grid lattice,
/// so snapping is exact and snapped volume equals nominal volume.
struct CellCube {
  std::array<std::int64_t, kMaxDim> a{};
  std::int64_t w = 0;

  Cube to_cube(const Domain& dom) const {
    Cube q;
    q.center.n = dom.dim();
    for (int i = 0; i < dom.dim(); ++i)
      q.center.x[i] = dom.bbox_lo().x[i] + dom.h().mul_ll(2 * a[i] + w).div_pow2(1);
    q.half = dom.h().mul_ll(w).div_pow2(1);
    return q;
  }
  bool contains_cell(const std::array<std::int64_t, kMaxDim>& c, int n) const {
    for (int i = 0; i < n; ++i)
      if (c[i] < a[i] || c[i] >= a[i] + w) return false;
    return true;
  }
};

/// Fast exact membership for cell cubes via the precomputed distance caches:
/// even widths have node centers, odd widths cell centers.
inline bool in_family_fast(const Domain& dom, const CellCube& cc, const Rational& beta) {
  const Dyadic* d;
  if (cc.w % 2 == 0) {
    std::array<std::int64_t, kMaxDim> ni{};
    for (int i = 0; i < dom.dim(); ++i) ni[i] = cc.a[i] + cc.w / 2;
    d = &dom.node_distance(dom.node_flat(ni));
  } else {
    std::array<std::int64_t, kMaxDim> ci{};
    for (int i = 0; i < dom.dim(); ++i) ci[i] = cc.a[i] + (cc.w - 1) / 2;
    d = &dom.cell_center_distance(dom.cell_flat(ci));
  }
  if (d->sign() <= 0) return false;
  // w*h/2 < beta * d  <=>  w*h*den < 2*num*d
  return dom.h().mul_ll(cc.w * beta.den) < d->mul_ll(2 * beta.num);
}

struct EnumerateSpec {
  std::vector<std::int64_t> widths;  // cell widths, ascending
  std::int64_t offset_step = 1;      // lattice step in cells
  bool require_dilation_inside = 0;  // keep only cubes with 10Q inside the bbox
};

/// Deterministic enumeration of lattice cubes in F_beta: lexicographic by
/// width then offsets. Calls fn for each member.
void enumerate_family_cubes(const Domain& dom, const FamilyParams& fp, const EnumerateSpec& spec,
                            const std::function<void(const CellCube&)>& fn);

std::vector<CellCube> collect_family_cubes(const Domain& dom, const FamilyParams& fp,
                                           const EnumerateSpec& spec);

}  // namespace lmax
