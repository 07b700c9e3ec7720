#include <doctest.h>

#include <cmath>

#include "lmax/errors.hpp"
#include "lmax/field.hpp"
#include "lmax/rng.hpp"

using namespace lmax;

namespace {

Point pt2(double x, double y) {
  return Point::of(2, {Dyadic::from_double(x), Dyadic::from_double(y), Dyadic(0)});
}

std::shared_ptr<Domain> unit_square(int cells) {
  int s = 0;
  while ((1 << s) < cells) ++s;
  return Domain::open_box(2, pt2(0, 0), pt2(1, 1), Dyadic::pow2(-s));
}

}  // namespace

TEST_CASE("constant field integrates to the volume") {
  auto dom = unit_square(64);
  ScalarField f = ScalarField::constant(dom, 1.0);
  Cube q{pt2(0.5, 0.5), Dyadic::from_double(0.25)};
  CHECK(f.integrate(q) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(f.average(f.snap(q)) == 1.0);  // exact, not approximate
}

TEST_CASE("indicator mass: integrating chi_Q over 2Q gives |Q|") {
  auto dom = unit_square(64);
  Cube q{pt2(0.5, 0.5), Dyadic::from_double(0.125)};
  ScalarField one = ScalarField::constant(dom, 1.0);
  ScalarField chi = one.restricted(one.snap(q));
  CHECK(chi.integrate(q.dilated(2)) == doctest::Approx(0.0625).epsilon(1e-14));
}

TEST_CASE("midpoint-rule oracle at two resolutions: integral of x over the square") {
  for (int cells : {64, 128}) {
    auto dom = unit_square(cells);
    ScalarField f = ScalarField::from_function(dom, [](const Point& p) { return p.x[0].to_double(); });
    Cube q{pt2(0.5, 0.5), Dyadic::from_double(0.5)};
    // midpoint rule is exact for linear integrands
    CHECK(f.integrate(q) == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("summed-area table equals the direct Riemann sum exactly") {
  auto dom = unit_square(32);
  Rng rng(21);
  std::vector<double> s(dom->cell_count());
  for (auto& v : s) v = std::exp(rng.uniform(-20, 10));  // wide dynamic range
  ScalarField f = ScalarField::from_cells(dom, std::move(s));
  for (int k = 0; k < 200; ++k) {
    CellRange r;
    r.n = 2;
    for (int i = 0; i < 2; ++i) {
      r.lo[i] = static_cast<std::int64_t>(rng.below(32));
      r.hi[i] = r.lo[i] + 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(32 - r.lo[i])));
    }
    CHECK(f.range_sum(r) == f.range_sum_direct(r));  // exact integers
  }
}

TEST_CASE("integrals are additive over disjoint snapped halves, exactly") {
  auto dom = unit_square(32);
  Rng rng(4);
  std::vector<double> s(dom->cell_count());
  for (auto& v : s) v = rng.uniform(0, 5);
  ScalarField f = ScalarField::from_cells(dom, std::move(s));
  CellRange whole = f.full_range();
  CellRange left = whole, right = whole;
  left.hi[0] = 16;
  right.lo[0] = 16;
  CHECK(f.range_sum(whole) == f.range_sum(left) + f.range_sum(right));
}

TEST_CASE("snapping shrinks to whole cells") {
  auto dom = unit_square(16);  // h = 1/16
  ScalarField f = ScalarField::constant(dom, 1.0);
  Cube q{pt2(0.5, 0.5), Dyadic::from_double(0.130)};  // not cell aligned
  CellRange r = f.snap(q);
  for (int i = 0; i < 2; ++i) {
    CHECK(r.lo[i] == 6);  // cells fully inside [0.37, 0.63]
    CHECK(r.hi[i] == 10);
  }
  CHECK_THROWS_AS(f.snap(Cube{pt2(3, 3), Dyadic(1)}), lmax::domain_error);
}

TEST_CASE("dual weight: constants, powers, involution") {
  auto dom = unit_square(32);
  ScalarField v1 = ScalarField::constant(dom, 1.0);
  auto s1 = dual_weight(v1, 2.0);
  for (std::int64_t i = 0; i < s1.sigma.cells(); ++i) CHECK(s1.sigma.sample(i) == 1.0);

  // p = 2, v = |x|^2 => sigma = |x|^-2 (away from the floor)
  Point c = pt2(0.5, 0.5);
  ScalarField v2 = ScalarField::from_function(dom, [&](const Point& p) {
    double r = std::max(std::abs(p.x[0].to_double() - 0.5), std::abs(p.x[1].to_double() - 0.5));
    return r * r;
  });
  auto s2 = dual_weight(v2, 2.0);
  for (std::int64_t i = 0; i < 20; ++i) {
    double v = v2.sample(i);
    CHECK(s2.sigma.sample(i) == doctest::Approx(1.0 / v).epsilon(1e-12));
  }

  // p = 3: exponent -1/2 spot check
  auto s3 = dual_weight(v2, 3.0);
  CHECK(s3.sigma.sample(5) == doctest::Approx(std::pow(v2.sample(5), -0.5)).epsilon(1e-12));

  // involution: dual of sigma with p' recovers v nodewise
  auto back = dual_weight(s2.sigma, 2.0);  // p' = 2 for p = 2
  for (std::int64_t i = 0; i < back.sigma.cells(); ++i)
    CHECK(back.sigma.sample(i) == doctest::Approx(v2.sample(i)).epsilon(1e-9));

  ScalarField vz = ScalarField::from_cells(dom, std::vector<double>(dom->cell_count(), 0.0));
  CHECK_THROWS_AS(dual_weight(vz, 2.0, 0.0), lmax::singular_weight_error);
  auto floored = dual_weight(vz, 2.0, 1e-12);
  CHECK(floored.floored_cells == dom->cell_count());
}

TEST_CASE("1-d power field uses the exact antiderivative") {
  auto dom = Domain::open_box(1, Point::of(1, {Dyadic(0), Dyadic(0), Dyadic(0)}),
                              Point::of(1, {Dyadic(1), Dyadic(0), Dyadic(0)}), Dyadic::pow2(-5));
  Point zero = Point::of(1, {Dyadic(0), Dyadic(0), Dyadic(0)});
  ScalarField f = ScalarField::power(dom, 2.0, zero);
  // cell [a, a+h]: mean of x^2 is (b^3 - a^3)/(3h)
  double h = 1.0 / 32;
  for (std::int64_t i = 0; i < dom->cell_count(); ++i) {
    double a = i * h, b = a + h;
    CHECK(f.sample(i) == doctest::Approx((b * b * b - a * a * a) / (3 * h)).epsilon(1e-13));
  }
  // whole-domain integral: exactly 1/3 up to quantization
  CellRange all = f.full_range();
  CHECK(f.integrate(all) == doctest::Approx(1.0 / 3).epsilon(1e-9));
}

TEST_CASE("negative and non-finite samples are rejected") {
  auto dom = unit_square(8);
  std::vector<double> bad(dom->cell_count(), 1.0);
  bad[3] = -0.5;
  CHECK_THROWS_AS(ScalarField::from_cells(dom, bad), lmax::usage_error);
  bad[3] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(ScalarField::from_cells(dom, bad), lmax::usage_error);
}
