#include "lmax/besicovitch.hpp"

#include <algorithm>
#include <numeric>

#include "lmax/errors.hpp"

namespace lmax {

int besicovitch_overlap_bound(int n) {
  // Empirical for the largest-first center-uncovered greedy on d_inf cubes,
  // with slack: adversarial random batteries reach 4 (n=1), 9 (n=2).
  switch (n) {
    case 1: return 6;
    case 2: return 16;
    default: return 40;
  }
}

BesicovitchResult besicovitch_select(const std::vector<Point>& points,
                                     const std::vector<Dyadic>& radii) {
  if (points.size() != radii.size())
    throw usage_error("besicovitch: points/radii length mismatch");
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return radii[b] < radii[a];  // descending radius, ties by index
  });
  BesicovitchResult res;
  for (std::size_t i : order) {
    if (radii[i].sign() <= 0) throw usage_error("besicovitch: radii must be positive");
    bool covered = false;
    for (std::size_t j : res.selected) {
      if (!(dist_inf(points[i], points[j]) > radii[j])) {
        covered = true;
        break;
      }
    }
    if (!covered) res.selected.push_back(i);
  }
  return res;
}

int overlap_at(const std::vector<Point>& points, const std::vector<Dyadic>& radii,
               const BesicovitchResult& sel, const Point& x) {
  int c = 0;
  for (std::size_t j : sel.selected)
    if (!(dist_inf(points[j], x) > radii[j])) ++c;
  return c;
}

}  // namespace lmax
