#include <doctest.h>

#include "lmax/domain.hpp"
#include "lmax/errors.hpp"
#include "lmax/rng.hpp"

using namespace lmax;

namespace {

Point pt2(double x, double y) {
  return Point::of(2, {Dyadic::from_double(x), Dyadic::from_double(y), Dyadic(0)});
}

std::shared_ptr<Domain> punctured_square(int cells) {
  int s = 0;
  while ((1 << s) < cells) ++s;
  return Domain::punctured_box(2, pt2(0, 0), pt2(1, 1), pt2(0.5, 0.5), Dyadic::pow2(-s));
}

}  // namespace

TEST_CASE("punctured plane distance is the max coordinate gap") {
  auto dom = Domain::punctured_space(2, pt2(0, 0), pt2(-8, -8), pt2(8, 8), Dyadic::pow2(-2));
  CHECK(dom->distance(pt2(3, 4)) == Dyadic(4));
  CHECK(dom->distance(pt2(-3, 2)) == Dyadic(3));
  CHECK(dom->distance(pt2(0, 0)).is_zero());
  CHECK(dom->interior(pt2(3, 4)));
  CHECK_FALSE(dom->interior(pt2(0, 0)));
}

TEST_CASE("half plane distance") {
  auto dom = Domain::half_space(2, 0, Dyadic(0), pt2(0, -4), pt2(8, 4), Dyadic::pow2(-2));
  CHECK(dom->distance(pt2(2, 3)) == Dyadic(2));
  CHECK(dom->distance(pt2(0, 1)).is_zero());
  CHECK_THROWS_AS(dom->distance(pt2(9, 0)), lmax::domain_error);
}

TEST_CASE("open box and annulus distances") {
  auto box = Domain::open_box(2, pt2(0, 0), pt2(1, 1), Dyadic::pow2(-6));
  CHECK(box->distance(pt2(0.5, 0.5)) == Dyadic::from_double(0.5));
  CHECK(box->distance(pt2(0.25, 0.5)) == Dyadic::from_double(0.25));
  CHECK(box->distance(pt2(1, 0.5)).is_zero());

  auto ann = Domain::box_annulus(2, pt2(0, 0), pt2(1, 1), pt2(0.375, 0.375), pt2(0.625, 0.625),
                                 Dyadic::pow2(-6));
  CHECK(ann->distance(pt2(0.5, 0.5)).is_zero());           // inside the removed box
  CHECK(ann->distance(pt2(0.5, 0.75)) == Dyadic::from_double(0.125));
  CHECK(ann->distance(pt2(0.5, 0.96875)) == Dyadic::from_double(0.03125));
}

TEST_CASE("mask domain: open unit square at h=1/64") {
  std::array<std::int64_t, kMaxDim> dims{64, 64, 0};
  std::vector<std::uint8_t> inside(64 * 64, 1);
  auto dom = Domain::from_mask(2, dims, inside, pt2(0, 0), Dyadic::pow2(-6));
  CHECK(dom->distance(pt2(0.5, 0.5)) == Dyadic::from_double(0.5));
  CHECK(dom->distance(pt2(0.25, 0.5)) == Dyadic::from_double(0.25));
  // BFS hops at the central lattice node: 32 cells of 1/64
  std::array<std::int64_t, kMaxDim> center{32, 32, 0};
  CHECK(dom->node_hops()[dom->node_flat(center)] == 32);
}

TEST_CASE("mask BFS equals exact distance at every node") {
  // rasterized punctured square: 2x2 block of removed cells at the center
  int n = 32;
  std::array<std::int64_t, kMaxDim> dims{n, n, 0};
  std::vector<std::uint8_t> inside(n * n, 1);
  auto cell = [&](int i, int j) { return i * n + j; };
  inside[cell(n / 2 - 1, n / 2 - 1)] = inside[cell(n / 2 - 1, n / 2)] = 0;
  inside[cell(n / 2, n / 2 - 1)] = inside[cell(n / 2, n / 2)] = 0;
  auto dom = Domain::from_mask(2, dims, inside, pt2(0, 0), Dyadic::pow2(-5));
  for (std::int64_t f = 0; f < dom->node_count(); ++f) {
    Dyadic bfs = dom->h().mul_ll(dom->node_hops()[f]);
    CHECK(bfs == dom->node_distance(f));
  }
}

TEST_CASE("analytic vs rasterized punctured square agree within one cell") {
  int n = 32;
  auto analytic = punctured_square(n);
  std::array<std::int64_t, kMaxDim> dims{n, n, 0};
  std::vector<std::uint8_t> inside(n * n, 1);
  auto cell = [&](int i, int j) { return i * n + j; };
  inside[cell(n / 2 - 1, n / 2 - 1)] = inside[cell(n / 2 - 1, n / 2)] = 0;
  inside[cell(n / 2, n / 2 - 1)] = inside[cell(n / 2, n / 2)] = 0;
  auto mask = Domain::from_mask(2, dims, inside, pt2(0, 0), analytic->h());
  Dyadic h = analytic->h();
  std::int64_t exact = 0;
  for (std::int64_t f = 0; f < analytic->node_count(); ++f) {
    Dyadic da = analytic->node_distance(f);
    Dyadic db = mask->node_distance(f);
    CHECK(!(db > da));               // the fattened puncture only shrinks d
    CHECK(!((da - db).abs() > h));   // within one cell
    if (da == db) ++exact;
  }
  CHECK(exact > analytic->node_count() / 2);  // frame region matches exactly
}

TEST_CASE("distance field is 1-Lipschitz in the sup metric (sampled)") {
  auto dom = punctured_square(64);
  Rng rng(11);
  for (int k = 0; k < 500; ++k) {
    std::array<std::int64_t, kMaxDim> a{}, b{};
    for (int i = 0; i < 2; ++i) {
      a[i] = static_cast<std::int64_t>(rng.below(65));
      b[i] = static_cast<std::int64_t>(rng.below(65));
    }
    Dyadic da = dom->node_distance(dom->node_flat(a));
    Dyadic db = dom->node_distance(dom->node_flat(b));
    Dyadic gap = dist_inf(dom->node_point(a), dom->node_point(b));
    CHECK(!((da - db).abs() > gap));
  }
}

TEST_CASE("box distance bounds are exact or sound") {
  auto dom = Domain::box_annulus(2, pt2(0, 0), pt2(1, 1), pt2(0.375, 0.375), pt2(0.625, 0.625),
                                 Dyadic::pow2(-6));
  Rng rng(3);
  for (int k = 0; k < 300; ++k) {
    std::array<Dyadic, kMaxDim> lo{}, hi{};
    for (int i = 0; i < 2; ++i) {
      double a = rng.uniform(0, 0.9), w = rng.uniform(0.01, 0.3);
      lo[i] = Dyadic::from_double(a);
      hi[i] = Dyadic::from_double(std::min(1.0, a + w));
    }
    Dyadic dmin = dom->min_distance_box(lo, hi);
    Dyadic dub = dom->max_distance_box_bound(lo, hi);
    // sample points inside the box
    for (int s = 0; s < 30; ++s) {
      Point p;
      p.n = 2;
      for (int i = 0; i < 2; ++i)
        p.x[i] = Dyadic::from_double(rng.uniform(lo[i].to_double(), hi[i].to_double()));
      Dyadic d = dom->distance_unchecked(p);
      CHECK(!(d < dmin));
      CHECK(!(d > dub));
    }
  }
}

TEST_CASE("witness search certifies large-distance points") {
  auto dom = punctured_square(64);
  std::array<Dyadic, kMaxDim> lo{Dyadic::from_double(0.0), Dyadic::from_double(0.0), Dyadic(0)};
  std::array<Dyadic, kMaxDim> hi{Dyadic::from_double(0.25), Dyadic::from_double(0.25), Dyadic(0)};
  // max of d over this corner box is 1/4, at its inner corner
  auto w = dom->witness_distance_at_least(lo, hi, Dyadic::from_double(0.25));
  REQUIRE(w.has_value());
  CHECK(!(dom->distance_unchecked(*w) < Dyadic::from_double(0.25)));
  CHECK_FALSE(dom->witness_distance_at_least(lo, hi, Dyadic::from_double(0.2600001)).has_value());
}

TEST_CASE("degenerate domains are rejected") {
  std::array<std::int64_t, kMaxDim> dims{4, 4, 0};
  std::vector<std::uint8_t> none(16, 0);
  CHECK_THROWS(Domain::from_mask(2, dims, none, pt2(0, 0), Dyadic::pow2(-2)));
}
