#include "lmax/whitney.hpp"

#include <algorithm>
#include <functional>

#include "lmax/errors.hpp"

namespace lmax {

namespace {

struct Builder {
  const Domain& dom;
  Rational beta;
  int t;
  int band_floor;
  WhitneyCovering out;

  void box_of(const DyadicCube& c, std::array<Dyadic, kMaxDim>& blo,
              std::array<Dyadic, kMaxDim>& bhi) const {
    for (int i = 0; i < dom.dim(); ++i) {
      blo[i] = Dyadic::from_parts(c.idx[i], -c.scale);
      bhi[i] = Dyadic::from_parts(c.idx[i] + 1, -c.scale);
    }
  }

  // Process one dyadic cube at its band k = t+1-scale. Returns after either
  // assigning covering members for the cube's region or recursing.
  void process(const DyadicCube& c) {
    int k = t + 1 - c.scale;
    if (k < band_floor) return;
    std::array<Dyadic, kMaxDim> blo, bhi;
    box_of(c, blo, bhi);

    Dyadic lo_band = Dyadic::pow2(k - 1);  // Omega_k = { 2^(k-1) <= d < 2^k }
    Dyadic hi_band = Dyadic::pow2(k);

    Dyadic dmin = dom.min_distance_box(blo, bhi);
    if (!(dmin < hi_band)) {
      // all points at distance >= 2^k: no sub-band can meet this region
      return;
    }
    bool meets_k;
    if (!(dmin < lo_band)) {
      meets_k = true;  // the min point itself lies in the band
    } else {
      auto wit = dom.witness_distance_at_least(blo, bhi, lo_band);
      if (!wit) {
        if (!(dom.max_distance_box_bound(blo, bhi) < lo_band)) ++out.certification_giveups;
        meets_k = false;
      } else {
        meets_k = true;
      }
    }
    if (!meets_k) {
      descend(c);
      return;
    }
    // member of G_k; subdivide when it reaches Omega_{k-1}
    if (dmin < lo_band) {
      // paper's three-band exclusion, partial probe check: a certified
      // witness above 2^k next to a point below 2^(k-1) would contradict it
      if (dom.witness_distance_at_least(blo, bhi, hi_band, 2))
        throw domain_error("whitney: cube certified in three bands");
      for (int m = 0; m < (1 << dom.dim()); ++m)
        out.cubes.push_back(WhitneyCube{c.child(dom.dim(), m), k - 1,
                                        Provenance::subdivided_child});
    } else {
      out.cubes.push_back(WhitneyCube{c, k, Provenance::kept_whole});
    }
  }

  void descend(const DyadicCube& c) {
    int k = t + 1 - c.scale;
    if (k - 1 < band_floor) return;
    for (int m = 0; m < (1 << dom.dim()); ++m) process(c.child(dom.dim(), m));
  }
};

}  // namespace

WhitneyCovering build_whitney(const Domain& dom, const Rational& beta, int t,
                              const WhitneyBuildOptions& opts) {
  if (t < 1) throw precondition_error("whitney: t must be a positive integer");
  // 2^-t <= beta/5  <=>  5 <= beta * 2^t  <=>  5*den <= num * 2^t
  {
    __int128 lhs = static_cast<__int128>(5) * beta.den;
    __int128 rhs = static_cast<__int128>(beta.num);
    for (int i = 0; i < t && rhs < (static_cast<__int128>(1) << 100); ++i) rhs *= 2;
    if (lhs > rhs) throw precondition_error("whitney: need 2^-t <= beta/5");
  }

  Builder b{dom, beta, t, 0, {}};
  b.out.t = t;
  b.out.beta = beta;

  Dyadic dmax = dom.max_node_distance();
  if (dmax.sign() <= 0) throw domain_error("whitney: domain has no interior node");
  int k_top = dmax.band_index() + 1;  // strictly above every node band
  b.band_floor = opts.band_floor ? *opts.band_floor
                                 : dom.min_positive_node_distance().band_index();
  b.out.band_floor = b.band_floor;

  // root tiling of the bounding box at the top-band scale (clip + margin)
  int s_root = t + 1 - k_top;
  Dyadic side = Dyadic::pow2(-s_root);
  std::array<std::int64_t, kMaxDim> jlo{}, jhi{};
  for (int i = 0; i < dom.dim(); ++i) {
    jlo[i] = Dyadic::floor_div(dom.bbox_lo().x[i], side);
    jhi[i] = Dyadic::floor_div(dom.bbox_hi().x[i], side) + 1;
  }
  std::array<std::int64_t, kMaxDim> j{};
  for (j[0] = jlo[0]; j[0] <= jhi[0]; ++j[0])
    for (j[1] = (dom.dim() > 1 ? jlo[1] : 0); j[1] <= (dom.dim() > 1 ? jhi[1] : 0); ++j[1])
      for (j[2] = (dom.dim() > 2 ? jlo[2] : 0); j[2] <= (dom.dim() > 2 ? jhi[2] : 0); ++j[2])
        b.process(DyadicCube{s_root, j});

  std::sort(b.out.cubes.begin(), b.out.cubes.end(), [](const WhitneyCube& x, const WhitneyCube& y) {
    if (x.cube.scale != y.cube.scale) return x.cube.scale < y.cube.scale;
    return x.cube.idx < y.cube.idx;
  });
  return b.out;
}

CoverageReport check_coverage(const WhitneyCovering& w, const Domain& dom) {
  CoverageReport rep;
  std::vector<std::int32_t> count(dom.node_count(), 0);
  const int n = dom.dim();
  for (const auto& wc : w.cubes) {
    // half-open membership: nodes with idx*2^-s <= y < (idx+1)*2^-s
    std::array<std::int64_t, kMaxDim> nlo{}, nhi{};
    bool any = true;
    for (int i = 0; i < n; ++i) {
      Dyadic clo = Dyadic::from_parts(wc.cube.idx[i], -wc.cube.scale);
      Dyadic chi = Dyadic::from_parts(wc.cube.idx[i] + 1, -wc.cube.scale);
      nlo[i] = std::max<std::int64_t>(0, Dyadic::ceil_div(clo - dom.bbox_lo().x[i], dom.h()));
      // strict upper end for half-open cubes
      Dyadic off = chi - dom.bbox_lo().x[i];
      std::int64_t top = Dyadic::floor_div(off, dom.h());
      if (dom.h().mul_ll(top) == off) --top;
      nhi[i] = std::min<std::int64_t>(dom.dims()[i], top);
      if (nlo[i] > nhi[i]) any = false;
    }
    if (!any) continue;
    std::array<std::int64_t, kMaxDim> idx{};
    for (idx[0] = nlo[0]; idx[0] <= nhi[0]; ++idx[0])
      for (idx[1] = (n > 1 ? nlo[1] : 0); idx[1] <= (n > 1 ? nhi[1] : 0); ++idx[1])
        for (idx[2] = (n > 2 ? nlo[2] : 0); idx[2] <= (n > 2 ? nhi[2] : 0); ++idx[2])
          ++count[dom.node_flat(idx)];
  }
  for (std::int64_t f = 0; f < dom.node_count(); ++f) {
    if (dom.node_distance(f).sign() <= 0) continue;
    ++rep.interior_nodes;
    if (count[f] >= 1) ++rep.covered_nodes;
    if (count[f] > 1) ++rep.multi_covered;
  }
  rep.covered = rep.covered_nodes == rep.interior_nodes;
  rep.disjoint = rep.multi_covered == 0;
  return rep;
}

InvariantReport check_invariants(const WhitneyCovering& w, const Domain& dom) {
  InvariantReport rep;
  const int n = dom.dim();
  FamilyParams fp(w.beta);
  for (const auto& wc : w.cubes) {
    Cube q = wc.cube.to_cube(n);
    Dyadic d = dom.distance_unchecked(q.center);
    if (d.sign() <= 0) {
      rep.property_i = false;
      rep.first_violation = "center outside domain";
      break;
    }
    // (i) 10R in F_beta
    if (!in_family(q.dilated(10), fp, dom)) {
      rep.property_i = false;
      rep.first_violation = "10R not in family";
      break;
    }
    // (i) 2^(-t-3) d <= l <= 2^(-t-1) d, exact
    if (q.half < d.mul_pow2(-w.t - 3) || d.mul_pow2(-w.t - 1) < q.half) {
      rep.property_i = false;
      rep.first_violation = "l/d sandwich";
      break;
    }
    // band sandwich 2^(k-1) < d <= 2^(k+1)
    if (!(Dyadic::pow2(wc.band - 1) < d) || Dyadic::pow2(wc.band + 1) < d) {
      rep.band_sandwich = false;
      rep.first_violation = "band sandwich";
      break;
    }
  }
  return rep;
}

std::vector<std::size_t> cubes_meeting_box(const WhitneyCovering& w, const Domain& dom,
                                           const std::array<Dyadic, kMaxDim>& blo,
                                           const std::array<Dyadic, kMaxDim>& bhi) {
  std::vector<std::size_t> out;
  const int n = dom.dim();
  for (std::size_t i = 0; i < w.cubes.size(); ++i) {
    const auto& c = w.cubes[i].cube;
    bool meets = true;
    for (int d = 0; d < n && meets; ++d) {
      Dyadic clo = Dyadic::from_parts(c.idx[d], -c.scale);
      Dyadic chi = Dyadic::from_parts(c.idx[d] + 1, -c.scale);
      if (chi < blo[d] || bhi[d] < clo) meets = false;
    }
    if (meets) out.push_back(i);
  }
  return out;
}

}  // namespace lmax
