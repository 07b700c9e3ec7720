#include <doctest.h>

#include "lmax/cloud.hpp"
#include "lmax/errors.hpp"
#include "lmax/field.hpp"

using namespace lmax;

namespace {

Point pt2(double x, double y) {
  return Point::of(2, {Dyadic::from_double(x), Dyadic::from_double(y), Dyadic(0)});
}

std::shared_ptr<Domain> punctured_plane8(double h_exp = -3) {
  return Domain::punctured_space(2, pt2(0, 0), pt2(-8, -8), pt2(8, 8),
                                 Dyadic::pow2(static_cast<int>(h_exp)));
}

std::shared_ptr<Domain> punctured_square(int cells) {
  int s = 0;
  while ((1 << s) < cells) ++s;
  return Domain::punctured_box(2, pt2(0, 0), pt2(1, 1), pt2(0.5, 0.5), Dyadic::pow2(-s));
}

}  // namespace

TEST_CASE("the base cube lies inside its own cloud") {
  auto dom = punctured_plane8();
  Cube q{pt2(3, 3), Dyadic::from_double(0.5)};
  Cloud c = compute_cloud(*dom, q, Rational(1, 2));
  CellRange r;
  r.n = 2;
  for (int i = 0; i < 2; ++i) {
    r.lo[i] = Dyadic::ceil_div(q.lo(i) - dom->bbox_lo().x[i], dom->h());
    r.hi[i] = Dyadic::floor_div(q.hi(i) - dom->bbox_lo().x[i], dom->h());
  }
  std::array<std::int64_t, kMaxDim> ci{};
  for (ci[0] = r.lo[0]; ci[0] < r.hi[0]; ++ci[0])
    for (ci[1] = r.lo[1]; ci[1] < r.hi[1]; ++ci[1])
      CHECK(c.cells[dom->cell_flat(ci)] == 1);
}

TEST_CASE("cloud ratio |N|/|Q| on the punctured plane is finite") {
  auto dom = punctured_plane8();
  Cube q{pt2(3, 3), Dyadic::from_double(0.5)};
  Cloud c = compute_cloud(*dom, q, Rational(1, 2));
  double ratio = c.measure / 1.0;  // |Q| = 1
  CHECK(ratio > 1.0);
  CHECK(ratio < 100.0);
}

TEST_CASE("cloud is confined to finitely many bands around the base") {
  auto dom = punctured_plane8();
  int h1_max = 0, h2_max = 0;
  for (double cx : {1.0, 2.0, 3.5}) {
    Cube q{pt2(cx, cx), Dyadic::from_double(cx / 8)};
    REQUIRE(in_family(q, Rational(1, 2), *dom));
    Cloud c = compute_cloud(*dom, q, Rational(1, 2));
    int k0 = dom->distance_unchecked(q.center).band_index();
    h1_max = std::max(h1_max, k0 - c.band_min);
    h2_max = std::max(h2_max, c.band_max - k0);
  }
  // Lemma-style uniform band window (measured; beta = 1/2)
  CHECK(h1_max <= 4);
  CHECK(h2_max <= 3);
}

TEST_CASE("finer lattices only grow the cloud") {
  auto dom = punctured_square(32);
  Cube q{pt2(0.25, 0.25), Dyadic::from_double(0.0625)};
  REQUIRE(in_family(q, Rational(1, 2), *dom));
  CloudOptions coarse, fine;
  coarse.initial_refinement = 0;
  coarse.max_refinement = 0;
  coarse.refine_until_stable = false;
  fine.initial_refinement = 1;
  fine.max_refinement = 1;
  fine.refine_until_stable = false;
  Cloud a = compute_cloud(*dom, q, Rational(1, 2), coarse);
  Cloud b = compute_cloud(*dom, q, Rational(1, 2), fine);
  for (std::int64_t f = 0; f < dom->cell_count(); ++f)
    if (a.cells[f]) CHECK(b.cells[f] == 1);
  CHECK(b.measure >= a.measure);
}

TEST_CASE("cloud preconditions") {
  auto dom = punctured_square(32);
  Cube not_in{pt2(0.5 + 1.0 / 64, 0.5), Dyadic::from_double(0.25)};  // too big near puncture
  CHECK_THROWS_AS(compute_cloud(*dom, not_in, Rational(1, 2)), lmax::precondition_error);
}

TEST_CASE("whitney neighbors: cardinal at least one, preconditions enforced") {
  auto dom = punctured_square(64);
  WhitneyCovering w = build_whitney(*dom, Rational(1, 2), 6);
  // Q0 in F_beta with 10 Q0 outside the family
  Cube q0{pt2(0.25, 0.25), Dyadic::from_double(3.0 / 64)};
  REQUIRE(in_family(q0, Rational(1, 2), *dom));
  REQUIRE_FALSE(in_family(q0.dilated(10), Rational(1, 2), *dom));
  auto rep = whitney_neighbors(w, *dom, q0, Rational(1, 2));
  CHECK(rep.cardinal >= 1);
  CHECK(rep.union_measure > 0);
  CHECK(rep.union_measure + 1e-12 >= rep.cloud_measure * 0.0);  // sane numbers
  // 10 Q0 in family -> the other covering branch applies
  Cube deep{pt2(0.25, 0.25), Dyadic::from_double(1.0 / 256)};
  CHECK_THROWS_AS(whitney_neighbors(w, *dom, deep, Rational(1, 2)), lmax::precondition_error);
  Cube outside{pt2(0.5, 0.5), Dyadic::from_double(0.25)};
  CHECK_THROWS_AS(whitney_neighbors(w, *dom, outside, Rational(1, 2)), lmax::precondition_error);
}

TEST_CASE("cloud overlap: single cube and separated cubes give 1") {
  auto dom = punctured_plane8();
  Rational beta(1, 2), c1(1, 16), c2(1, 4);
  // Whitney-type: c1 < l/d < c2
  Cube a{pt2(2, 2), Dyadic::from_double(0.25)};    // l/d = 1/8
  Cube b{pt2(-4, -4), Dyadic::from_double(0.5)};   // l/d = 1/8, far away
  auto rep1 = cloud_overlap_check(*dom, {a}, beta, c1, c2);
  CHECK(rep1.max_overlap == 1);
  auto rep2 = cloud_overlap_check(*dom, {a, b}, beta, c1, c2);
  CHECK(rep2.max_overlap == 1);
}

TEST_CASE("cloud overlap rejects bad input") {
  auto dom = punctured_plane8();
  Rational beta(1, 2), c1(1, 16), c2(1, 4);
  Cube a{pt2(2, 2), Dyadic::from_double(0.25)};
  Cube overlapping{pt2(2.1, 2.1), Dyadic::from_double(0.25)};
  CHECK_THROWS_AS(cloud_overlap_check(*dom, {a, overlapping}, beta, c1, c2), lmax::usage_error);
  Cube not_whitney{pt2(2, 2), Dyadic::from_double(1.0)};  // l/d = 1/2 > c2
  CHECK_THROWS_AS(cloud_overlap_check(*dom, {not_whitney}, beta, c1, c2), lmax::usage_error);
}

TEST_CASE("whitney-band cubes have bounded cloud overlap") {
  auto dom = punctured_square(32);
  WhitneyCovering w = build_whitney(*dom, Rational(1, 2), 5);
  // take the disjoint cubes of one band; they are Whitney's type with
  // c1 = 2^-t-3, c2 = 2^-t (non-strict sandwich widened one notch)
  std::vector<Cube> band;
  for (const auto& wc : w.cubes)
    if (wc.band == -2 && band.size() < 12) band.push_back(wc.cube.to_cube(2));
  REQUIRE(band.size() >= 4);
  auto rep = cloud_overlap_check(*dom, band, Rational(1, 2), Rational(1, 512), Rational(1, 16));
  CHECK(rep.max_overlap >= 1);
  CHECK(rep.max_overlap <= 40);
}
