#include "lmax/cz.hpp"

#include <algorithm>

#include "lmax/errors.hpp"

namespace lmax {

CzResult cz_select(const ScalarField& f, const Cube& q, double level, const Rational& beta,
                   const WhitneyCovering& w) {
  const Domain& dom = f.domain();
  const int n = dom.dim();
  FamilyParams fp(beta);
  if (!in_family(q, fp, dom)) throw precondition_error("cz_select: Q not in family");
  CellRange qr = f.snap(q);
  if (qr.empty()) throw precondition_error("cz_select: cube below grid resolution");
  if (!(f.average(qr) > level)) throw precondition_error("cz_select: avg_Q f <= level");

  CzResult res;
  if (in_family(q.dilated(10), fp, dom)) {
    // case (i): dyadic cubes P of half-side 2^m with 2^m < l_Q <= 2^(m+1)
    // meeting the interior of Q; at most 3^n of them, and the best one has
    // integral above h|Q|/3^n, hence average above (5/24)^n h.
    res.tag = CzCase::dyadic_parent;
    // find m with 2^m < l_Q <= 2^(m+1): band_index gives 2^(b-1) <= l < 2^b
    int b = q.half.band_index();
    int m = (Dyadic::pow2(b - 1) == q.half) ? b - 2 : b - 1;
    int scale = -m - 1;  // dyadic side 2^(m+1)
    Dyadic side = Dyadic::pow2(m + 1);
    bool found = false;
    double best_avg = 0;
    Cube best{};
    std::array<std::int64_t, kMaxDim> jlo{}, jhi{};
    for (int i = 0; i < n; ++i) {
      // strict overlap with the interior of Q: j*side < q.hi and (j+1)*side > q.lo
      jlo[i] = Dyadic::floor_div(q.lo(i), side);
      if (side.mul_ll(jlo[i] + 1) == q.lo(i)) ++jlo[i];
      jhi[i] = Dyadic::ceil_div(q.hi(i), side) - 1;
    }
    std::array<std::int64_t, kMaxDim> j{};
    for (j[0] = jlo[0]; j[0] <= jhi[0]; ++j[0])
      for (j[1] = (n > 1 ? jlo[1] : 0); j[1] <= (n > 1 ? jhi[1] : 0); ++j[1])
        for (j[2] = (n > 2 ? jlo[2] : 0); j[2] <= (n > 2 ? jhi[2] : 0); ++j[2]) {
          Cube p = DyadicCube{scale, j}.to_cube(n);
          CellRange pr = f.snap(p);
          if (pr.empty()) continue;
          double avg = f.average(pr);
          if (!found || avg > best_avg) {
            best_avg = avg;
            best = p;
            found = true;
          }
        }
    if (!found) throw domain_error("cz_select: no dyadic neighbor with grid cells");
    res.selected = best;
    res.selected_avg = best_avg;
    res.constant = cz_c1(n);
    // verify Q subset 5P subset 8Q and 5P in F_beta
    Cube p5 = best.dilated(5), q8 = q.dilated(8);
    for (int i = 0; i < n; ++i) {
      if (q.lo(i) < p5.lo(i) || p5.hi(i) < q.hi(i)) res.contains_check = false;
      if (p5.lo(i) < q8.lo(i) || q8.hi(i) < p5.hi(i)) res.contains_check = false;
    }
    if (!in_family(p5, fp, dom)) res.contains_check = false;
    return res;
  }

  // case (ii): the covering cubes meeting Q cover Q, so the best average
  // among them exceeds level * |Q| / sum|R|.
  res.tag = CzCase::whitney_neighbor;
  std::array<Dyadic, kMaxDim> blo, bhi;
  for (int i = 0; i < n; ++i) {
    blo[i] = q.lo(i);
    bhi[i] = q.hi(i);
  }
  auto meet = cubes_meeting_box(w, dom, blo, bhi);
  if (meet.empty()) throw domain_error("cz_select: no covering cube meets Q");
  bool found = false;
  double best_avg = 0;
  Cube best{};
  for (auto i : meet) {
    Cube r = w.cubes[i].cube.to_cube(n);
    CellRange rr = f.snap(r);
    if (rr.empty()) continue;
    double avg = f.average(rr);
    if (!found || avg > best_avg) {
      best_avg = avg;
      best = r;
      found = true;
    }
  }
  if (!found) throw domain_error("cz_select: covering cubes below grid resolution");
  res.selected = best;
  res.selected_avg = best_avg;
  res.constant = best_avg / level;
  res.contains_check = cubes_meet(best, q);
  return res;
}

}  // namespace lmax
