#include <doctest.h>

#include "lmax/family.hpp"
#include "lmax/rng.hpp"

using namespace lmax;

namespace {

Point pt2(double x, double y) {
  return Point::of(2, {Dyadic::from_double(x), Dyadic::from_double(y), Dyadic(0)});
}

Cube cube2(double x, double y, double l) {
  return Cube{pt2(x, y), Dyadic::from_double(l)};
}

std::shared_ptr<Domain> punctured_plane() {
  return Domain::punctured_space(2, pt2(0, 0), pt2(-8, -8), pt2(8, 8), Dyadic::pow2(-3));
}

}  // namespace

TEST_CASE("membership is strict: l < beta d") {
  auto dom = punctured_plane();
  FamilyParams fp(Rational(1, 2));
  CHECK(in_family(cube2(3, 4, 1.9), fp, *dom));       // 1.9 < 2
  CHECK_FALSE(in_family(cube2(3, 4, 2.0), fp, *dom));  // equality rejected
  CHECK_FALSE(in_family(cube2(0, 0, 0.5), fp, *dom));  // center outside Omega, not an error
}

TEST_CASE("eps_strict shifts the test for float inputs") {
  auto dom = punctured_plane();
  FamilyParams tight(Rational(1, 2), Dyadic::from_double(0.2));
  CHECK_FALSE(in_family(cube2(3, 4, 1.9), tight, *dom));  // 1.9 + 0.2 not < 2
  CHECK(in_family(cube2(3, 4, 1.7), tight, *dom));
}

TEST_CASE("monotonicity in beta over enumerated cubes") {
  auto dom = punctured_plane();
  EnumerateSpec spec;
  spec.widths = {1, 2, 3, 4, 6, 8};
  spec.offset_step = 3;
  auto smaller = collect_family_cubes(*dom, FamilyParams(Rational(1, 4)), spec);
  FamilyParams bigger(Rational(1, 2));
  CHECK(!smaller.empty());
  for (const auto& cc : smaller) CHECK(in_family(cc.to_cube(*dom), bigger, *dom));
}

TEST_CASE("enumeration count matches the exhaustive predicate oracle") {
  // 32x32 mask domain: unit square with an off-center removed block
  std::array<std::int64_t, kMaxDim> dims{32, 32, 0};
  std::vector<std::uint8_t> inside(32 * 32, 1);
  for (int i = 10; i < 13; ++i)
    for (int j = 20; j < 24; ++j) inside[i * 32 + j] = 0;
  auto dom = Domain::from_mask(2, dims, inside, pt2(0, 0), Dyadic::pow2(-5));
  FamilyParams fp(Rational(1, 2));
  EnumerateSpec spec;
  spec.widths = {1, 2, 3};
  spec.offset_step = 1;
  auto got = collect_family_cubes(*dom, fp, spec);
  // oracle: direct scan over every (width, offset), independent predicate
  std::size_t count = 0;
  for (std::int64_t w : spec.widths)
    for (std::int64_t a0 = 0; a0 + w <= 32; ++a0)
      for (std::int64_t a1 = 0; a1 + w <= 32; ++a1) {
        Point c = Point::of(2, {dom->bbox_lo().x[0] + dom->h().mul_ll(2 * a0 + w).div_pow2(1),
                                dom->bbox_lo().x[1] + dom->h().mul_ll(2 * a1 + w).div_pow2(1),
                                Dyadic(0)});
        Dyadic d = dom->distance_unchecked(c);
        if (d.sign() > 0 && less_than_scaled(dom->h().mul_ll(w).div_pow2(1), fp.beta, d))
          ++count;
      }
  CHECK(got.size() == count);
}

TEST_CASE("enumeration order is deterministic and lexicographic") {
  auto dom = punctured_plane();
  EnumerateSpec spec;
  spec.widths = {2, 4};
  spec.offset_step = 8;
  auto a = collect_family_cubes(*dom, FamilyParams(Rational(1, 2)), spec);
  auto b = collect_family_cubes(*dom, FamilyParams(Rational(1, 2)), spec);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].w == b[i].w);
    CHECK(a[i].a == b[i].a);
  }
  for (std::size_t i = 1; i < a.size(); ++i)
    CHECK((a[i - 1].w < a[i].w || (a[i - 1].w == a[i].w && a[i - 1].a <= a[i].a)));
}

TEST_CASE("half-width subcubes stay in the family") {
  // the self-improvement proof uses: Qt subset Q with l_Q = 2 l_Qt => Qt in F_beta
  auto dom = punctured_plane();
  FamilyParams fp(Rational(1, 2));
  Rng rng(5);
  int checked = 0;
  for (int k = 0; k < 4000; ++k) {
    Cube q = cube2(rng.uniform(-6, 6), rng.uniform(-6, 6), rng.uniform(0.01, 2.0));
    if (!in_family(q, fp, *dom)) continue;
    Cube sub;
    sub.half = q.half.div_pow2(1);
    sub.center.n = 2;
    for (int i = 0; i < 2; ++i) {
      double off = rng.uniform(-1, 1) * sub.half.to_double();
      sub.center.x[i] = q.center.x[i] + Dyadic::from_double(off);
    }
    CHECK(in_family(sub, fp, *dom));
    ++checked;
  }
  CHECK(checked > 200);
}

TEST_CASE("fast cell-cube membership equals the exact test") {
  auto dom = punctured_plane();
  Rng rng(9);
  for (const Rational& beta : {Rational(1, 2), Rational(1, 5), Rational(3, 7)}) {
    for (int k = 0; k < 3000; ++k) {
      CellCube cc;
      cc.w = 1 + static_cast<std::int64_t>(rng.below(30));
      for (int i = 0; i < 2; ++i)
        cc.a[i] = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(dom->dims()[i] - cc.w + 1)));
      CHECK(in_family_fast(*dom, cc, beta) == in_family(cc.to_cube(*dom), beta, *dom));
    }
  }
}

TEST_CASE("empty width range yields an empty stream") {
  auto dom = punctured_plane();
  EnumerateSpec spec;  // no widths
  CHECK(collect_family_cubes(*dom, FamilyParams(Rational(1, 2)), spec).empty());
}
