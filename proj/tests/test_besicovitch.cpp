#include <doctest.h>

#include "lmax/besicovitch.hpp"
#include "lmax/errors.hpp"
#include "lmax/rng.hpp"

using namespace lmax;

namespace {

Point pt2(double x, double y) {
  return Point::of(2, {Dyadic::from_double(x), Dyadic::from_double(y), Dyadic(0)});
}

}  // namespace

TEST_CASE("single point selects its cube with overlap one") {
  std::vector<Point> pts = {pt2(0.3, 0.4)};
  std::vector<Dyadic> radii = {Dyadic::from_double(0.1)};
  auto res = besicovitch_select(pts, radii);
  REQUIRE(res.selected.size() == 1);
  CHECK(res.selected[0] == 0);
  CHECK(overlap_at(pts, radii, res, pts[0]) == 1);
}

TEST_CASE("duplicate points collapse to one cube") {
  std::vector<Point> pts = {pt2(0.5, 0.5), pt2(0.5, 0.5)};
  std::vector<Dyadic> radii = {Dyadic::from_double(0.1), Dyadic::from_double(0.1)};
  auto res = besicovitch_select(pts, radii);
  CHECK(res.selected.size() == 1);
}

TEST_CASE("mismatched input lengths are a usage error") {
  std::vector<Point> pts = {pt2(0, 0)};
  std::vector<Dyadic> radii;
  CHECK_THROWS_AS(besicovitch_select(pts, radii), lmax::usage_error);
}

TEST_CASE("500 random cubes: selection covers all centers, overlap bounded") {
  Rng rng(2024);
  std::vector<Point> pts;
  std::vector<Dyadic> radii;
  for (int i = 0; i < 500; ++i) {
    pts.push_back(pt2(rng.uniform(0, 1), rng.uniform(0, 1)));
    radii.push_back(Dyadic::from_double(rng.uniform(0.005, 0.1)));
  }
  auto res = besicovitch_select(pts, radii);
  CHECK(res.selected.size() >= 1);
  // coverage of every input center
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool covered = false;
    for (auto j : res.selected)
      if (!(dist_inf(pts[i], pts[j]) > radii[j])) covered = true;
    CHECK(covered);
  }
  // exhaustive overlap count on a probe grid plus all centers
  int maxo = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    maxo = std::max(maxo, overlap_at(pts, radii, res, pts[i]));
  for (int gx = 0; gx <= 64; ++gx)
    for (int gy = 0; gy <= 64; ++gy)
      maxo = std::max(maxo, overlap_at(pts, radii, res, pt2(gx / 64.0, gy / 64.0)));
  CHECK(maxo <= besicovitch_overlap_bound(2));
  CHECK(maxo >= 1);
}

TEST_CASE("adversarial shells still respect the documented bound") {
  // rings of shrinking cubes around one point
  std::vector<Point> pts;
  std::vector<Dyadic> radii;
  Rng rng(7);
  pts.push_back(pt2(0.5, 0.5));
  radii.push_back(Dyadic::from_double(0.4));
  for (int shell = 1; shell <= 5; ++shell) {
    double r = 0.4 / (1 << shell);
    for (int k = 0; k < 16; ++k) {
      double ang = rng.uniform(0, 6.28318);
      pts.push_back(pt2(0.5 + 2.2 * r * std::cos(ang), 0.5 + 2.2 * r * std::sin(ang)));
      radii.push_back(Dyadic::from_double(r * rng.uniform(0.9, 1.1)));
    }
  }
  auto res = besicovitch_select(pts, radii);
  int maxo = 0;
  for (const auto& p : pts) maxo = std::max(maxo, overlap_at(pts, radii, res, p));
  CHECK(maxo <= besicovitch_overlap_bound(2));
}

TEST_CASE("one-dimensional bound") {
  Rng rng(5);
  std::vector<Point> pts;
  std::vector<Dyadic> radii;
  for (int i = 0; i < 300; ++i) {
    pts.push_back(Point::of(1, {Dyadic::from_double(rng.uniform(0, 1)), Dyadic(0), Dyadic(0)}));
    radii.push_back(Dyadic::from_double(rng.uniform(0.001, 0.2)));
  }
  auto res = besicovitch_select(pts, radii);
  int maxo = 0;
  for (const auto& p : pts) maxo = std::max(maxo, overlap_at(pts, radii, res, p));
  CHECK(maxo <= besicovitch_overlap_bound(1));
}
