#pragma once

#include <vector>

#include "lmax/geom.hpp"

namespace lmax {

/// Greedy largest-first Besicovitch selection of centered cubes: a cube is
/// selected when its center is not yet covered by a selected cube. The
/// selection covers every input point; per-point overlap is bounded by a
/// dimensional constant (documented, tested value below).
struct BesicovitchResult {
  std::vector<std::size_t> selected;  // indices into the input, selection order
};

/// Documented empirical overlap bound of this greedy rule for d_inf cubes.
int besicovitch_overlap_bound(int n);

BesicovitchResult besicovitch_select(const std::vector<Point>& points,
                                     const std::vector<Dyadic>& radii);

/// Exact overlap count of the selected family at a point.
int overlap_at(const std::vector<Point>& points, const std::vector<Dyadic>& radii,
               const BesicovitchResult& sel, const Point& x);

}  // namespace lmax
