#include "lmax/cloud.hpp"

#include <algorithm>

#include "lmax/errors.hpp"

namespace lmax {

namespace {

// One lattice pass: mark cells whose center lies in some family cube
// R(z, l) with z on the step lattice, l a positive multiple of step,
// dist(z, Q) <= l and l < beta d(z).
void mark_pass(const Domain& dom, const Cube& q, const Rational& beta, const Dyadic& step,
               std::vector<std::uint8_t>& cells) {
  const int n = dom.dim();
  // range bound: dist(z,Q) <= beta d(z) <= beta (d(x_Q) + l_Q + dist(z,Q))
  //   => dist(z,Q) <= beta/(1-beta) (d(x_Q) + l_Q)
  Dyadic dq = dom.distance_unchecked(q.center);
  long long denom = beta.den - beta.num;
  // |z - x_Q| <= reach + l_Q with reach = beta/(1-beta)(d+l); work with the
  // denom-scaled value to stay in exact arithmetic
  Dyadic span_scaled = (dq + q.half).mul_ll(beta.num) + q.half.mul_ll(denom);
  std::array<std::int64_t, kMaxDim> zlo{}, zhi{};
  for (int i = 0; i < n; ++i) {
    // z lattice anchored at bbox lo, clipped to the bbox (family centers
    // must lie in Omega though the cubes may poke out)
    Dyadic lo_off = q.center.x[i] - dom.bbox_lo().x[i];
    long long span_steps = Dyadic::ceil_div(span_scaled, step.mul_ll(denom)) + 1;
    long long center_step = Dyadic::floor_div(lo_off, step);
    zlo[i] = std::max<std::int64_t>(0, center_step - span_steps);
    long long max_step = Dyadic::floor_div(dom.bbox_hi().x[i] - dom.bbox_lo().x[i], step);
    zhi[i] = std::min<std::int64_t>(max_step, center_step + span_steps + 1);
  }
  std::array<std::int64_t, kMaxDim> zi{};
  Point z;
  z.n = n;
  for (zi[0] = zlo[0]; zi[0] <= zhi[0]; ++zi[0])
    for (zi[1] = (n > 1 ? zlo[1] : 0); zi[1] <= (n > 1 ? zhi[1] : 0); ++zi[1])
      for (zi[2] = (n > 2 ? zlo[2] : 0); zi[2] <= (n > 2 ? zhi[2] : 0); ++zi[2]) {
        for (int i = 0; i < n; ++i) z.x[i] = dom.bbox_lo().x[i] + step.mul_ll(zi[i]);
        Dyadic dz = dom.distance_unchecked(z);
        if (dz.sign() <= 0) continue;
        // largest multiple of step strictly below beta*dz
        Dyadic cap = dz.mul_ll(beta.num);
        long long kmax = Dyadic::floor_div(cap, step.mul_ll(beta.den));
        if (step.mul_ll(kmax * beta.den) == cap) --kmax;  // strict
        if (kmax < 1) continue;
        Dyadic l = step.mul_ll(kmax);
        if (dist_point_cube(z, q) > l) continue;  // R(z,l) misses Q
        // mark cells with center within l of z
        std::array<std::int64_t, kMaxDim> clo{}, chi{};
        bool any = true;
        for (int i = 0; i < n; ++i) {
          // cell centers (j+1/2)h in [z_i - l, z_i + l]
          Dyadic a = z.x[i] - l - dom.bbox_lo().x[i];
          Dyadic b = z.x[i] + l - dom.bbox_lo().x[i];
          clo[i] = std::max<std::int64_t>(
              0, Dyadic::ceil_div(a.mul_pow2(1) - dom.h(), dom.h().mul_pow2(1)));
          chi[i] = std::min<std::int64_t>(
              dom.dims()[i] - 1, Dyadic::floor_div(b.mul_pow2(1) - dom.h(), dom.h().mul_pow2(1)));
          if (clo[i] > chi[i]) any = false;
        }
        if (!any) continue;
        std::array<std::int64_t, kMaxDim> ci{};
        for (ci[0] = clo[0]; ci[0] <= chi[0]; ++ci[0])
          for (ci[1] = (n > 1 ? clo[1] : 0); ci[1] <= (n > 1 ? chi[1] : 0); ++ci[1])
            for (ci[2] = (n > 2 ? clo[2] : 0); ci[2] <= (n > 2 ? chi[2] : 0); ++ci[2])
              cells[dom.cell_flat(ci)] = 1;
      }
}

}  // namespace

Cloud compute_cloud(const Domain& dom, const Cube& q, const Rational& beta,
                    const CloudOptions& opts) {
  if (!in_family(q, beta, dom)) throw precondition_error("cloud: base cube not in family");
  Cloud c;
  c.base = q;
  c.beta = beta;
  c.cells.assign(dom.cell_count(), 0);

  std::vector<std::uint8_t> prev;
  int r = opts.initial_refinement;
  for (;; ++r) {
    Dyadic step = dom.h().div_pow2(r);
    mark_pass(dom, q, beta, step, c.cells);
    c.refinement = r;
    if (!opts.refine_until_stable || r >= opts.max_refinement) break;
    if (!prev.empty() && prev == c.cells) break;
    prev = c.cells;
  }
  // ensure Q's own cells are present (y in Q => y in N via R = Q)
  const int n = dom.dim();
  std::array<std::int64_t, kMaxDim> clo{}, chi{};
  bool any = true;
  for (int i = 0; i < n; ++i) {
    Dyadic a = q.lo(i) - dom.bbox_lo().x[i], b = q.hi(i) - dom.bbox_lo().x[i];
    clo[i] = std::max<std::int64_t>(0, Dyadic::ceil_div(a.mul_pow2(1) - dom.h(), dom.h().mul_pow2(1)));
    chi[i] = std::min<std::int64_t>(dom.dims()[i] - 1,
                                    Dyadic::floor_div(b.mul_pow2(1) - dom.h(), dom.h().mul_pow2(1)));
    if (clo[i] > chi[i]) any = false;
  }
  if (any) {
    std::array<std::int64_t, kMaxDim> ci{};
    for (ci[0] = clo[0]; ci[0] <= chi[0]; ++ci[0])
      for (ci[1] = (n > 1 ? clo[1] : 0); ci[1] <= (n > 1 ? chi[1] : 0); ++ci[1])
        for (ci[2] = (n > 2 ? clo[2] : 0); ci[2] <= (n > 2 ? chi[2] : 0); ++ci[2])
          c.cells[dom.cell_flat(ci)] = 1;
  }

  double hv = dom.h().to_double(), vol = 1;
  for (int i = 0; i < n; ++i) vol *= hv;
  std::int64_t marked = 0;
  bool first = true;
  for (std::int64_t f = 0; f < dom.cell_count(); ++f) {
    if (!c.cells[f]) continue;
    ++marked;
    Dyadic d = dom.distance_unchecked(dom.cell_center(dom.cell_unflat(f)));
    if (d.sign() <= 0) continue;
    int band = d.band_index();
    if (first || band < c.band_min) c.band_min = band;
    if (first || band > c.band_max) c.band_max = band;
    first = false;
  }
  c.measure = static_cast<double>(marked) * vol;
  return c;
}

NeighborReport whitney_neighbors(const WhitneyCovering& w, const Domain& dom, const Cube& q0,
                                 const Rational& beta, const CloudOptions& opts) {
  FamilyParams fp(beta);
  if (!in_family(q0, fp, dom)) throw precondition_error("whitney_neighbors: Q0 not in family");
  if (in_family(q0.dilated(10), fp, dom))
    throw precondition_error("whitney_neighbors: 10*Q0 is in the family (CZ case (i) regime)");

  Cloud c = compute_cloud(dom, q0, beta, opts);
  NeighborReport rep;
  rep.cloud_measure = c.measure;
  double hv = dom.h().to_double(), vol = 1;
  for (int i = 0; i < dom.dim(); ++i) vol *= hv;
  rep.base_measure = 1;
  for (int i = 0; i < dom.dim(); ++i) rep.base_measure *= q0.half.to_double() * 2;

  // cells of the union of members, for the Lebesgue measure of W_{t,Q0}
  std::vector<std::uint8_t> union_cells(dom.cell_count(), 0);
  const int n = dom.dim();
  for (std::size_t i = 0; i < w.cubes.size(); ++i) {
    const auto& dc = w.cubes[i].cube;
    std::array<Dyadic, kMaxDim> blo, bhi;
    for (int d = 0; d < n; ++d) {
      blo[d] = Dyadic::from_parts(dc.idx[d], -dc.scale);
      bhi[d] = Dyadic::from_parts(dc.idx[d] + 1, -dc.scale);
    }
    // meets the cloud region: overlap with a marked cell, or with Q0 itself
    bool meets = false;
    {
      Cube rc = dc.to_cube(n);
      if (cubes_meet(rc, q0)) meets = true;
    }
    if (!meets) {
      std::array<std::int64_t, kMaxDim> clo{}, chi{};
      bool any = true;
      for (int d = 0; d < n; ++d) {
        clo[d] = std::max<std::int64_t>(
            0, Dyadic::ceil_div(blo[d] - dom.bbox_lo().x[d], dom.h()) - 1);
        chi[d] = std::min<std::int64_t>(dom.dims()[d] - 1,
                                        Dyadic::floor_div(bhi[d] - dom.bbox_lo().x[d], dom.h()));
        if (clo[d] > chi[d]) any = false;
      }
      if (any) {
        std::array<std::int64_t, kMaxDim> ci{};
        for (ci[0] = clo[0]; ci[0] <= chi[0] && !meets; ++ci[0])
          for (ci[1] = (n > 1 ? clo[1] : 0); ci[1] <= (n > 1 ? chi[1] : 0) && !meets; ++ci[1])
            for (ci[2] = (n > 2 ? clo[2] : 0); ci[2] <= (n > 2 ? chi[2] : 0) && !meets; ++ci[2])
              if (c.cells[dom.cell_flat(ci)]) meets = true;
      }
    }
    if (meets) {
      rep.members.push_back(i);
      // accumulate union cells (clip to grid)
      std::array<std::int64_t, kMaxDim> clo{}, chi{};
      bool any = true;
      for (int d = 0; d < n; ++d) {
        clo[d] = std::max<std::int64_t>(0, Dyadic::ceil_div(blo[d] - dom.bbox_lo().x[d], dom.h()));
        chi[d] = std::min<std::int64_t>(dom.dims()[d] - 1,
                                        Dyadic::floor_div(bhi[d] - dom.bbox_lo().x[d], dom.h()) - 1);
        if (clo[d] > chi[d]) any = false;
      }
      if (any) {
        std::array<std::int64_t, kMaxDim> ci{};
        for (ci[0] = clo[0]; ci[0] <= chi[0]; ++ci[0])
          for (ci[1] = (n > 1 ? clo[1] : 0); ci[1] <= (n > 1 ? chi[1] : 0); ++ci[1])
            for (ci[2] = (n > 2 ? clo[2] : 0); ci[2] <= (n > 2 ? chi[2] : 0); ++ci[2])
              union_cells[dom.cell_flat(ci)] = 1;
      }
    }
  }
  rep.cardinal = static_cast<std::int64_t>(rep.members.size());
  std::int64_t uc = 0;
  for (auto b : union_cells) uc += b;
  rep.union_measure = static_cast<double>(uc) * vol;
  // sub-h members contribute less than a cell; count them at face value
  for (auto i : rep.members) {
    Cube rc = w.cubes[i].cube.to_cube(n);
    if (rc.half.mul_pow2(1) < dom.h()) {
      double side = rc.half.to_double() * 2, v = 1;
      for (int d = 0; d < n; ++d) v *= side;
      rep.union_measure += v;
    }
  }
  return rep;
}

OverlapReport cloud_overlap_check(const Domain& dom, const std::vector<Cube>& cubes,
                                  const Rational& beta, const Rational& c1, const Rational& c2,
                                  const CloudOptions& opts) {
  // preconditions: pairwise disjoint, Whitney's type
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    Dyadic d = dom.distance_unchecked(cubes[i].center);
    if (d.sign() <= 0) throw usage_error("cloud_overlap: center outside domain");
    // c1 < l/d < c2, exact
    bool lower = d.mul_ll(c1.num) < cubes[i].half.mul_ll(c1.den);
    bool upper = cubes[i].half.mul_ll(c2.den) < d.mul_ll(c2.num);
    if (!lower || !upper) throw usage_error("cloud_overlap: collection is not of Whitney's type");
    for (std::size_t j = i + 1; j < cubes.size(); ++j)
      if (dist_inf(cubes[i].center, cubes[j].center) < cubes[i].half + cubes[j].half)
        throw usage_error("cloud_overlap: cubes overlap");
  }
  std::vector<std::int32_t> counts(dom.cell_count(), 0);
  for (const auto& q : cubes) {
    Cloud c = compute_cloud(dom, q, beta, opts);
    for (std::int64_t f = 0; f < dom.cell_count(); ++f)
      if (c.cells[f]) ++counts[f];
  }
  OverlapReport rep;
  rep.sampled_nodes = dom.cell_count();
  for (auto v : counts) rep.max_overlap = std::max(rep.max_overlap, static_cast<int>(v));
  return rep;
}

}  // namespace lmax
