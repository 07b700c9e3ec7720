#pragma once

#include <cstdint>
#include <vector>

#include "lmax/whitney.hpp"

namespace lmax {

/// Lattice under-approximation of the cloud N_beta(Q): the union of all
/// family cubes meeting Q, computed from candidate centers on a refinement
/// lattice and marked on grid cells. Finer lattices only grow the region.
struct Cloud {
  Cube base;
  Rational beta;
  std::vector<std::uint8_t> cells;  // 1 = cell center lies in the cloud
  double measure = 0;               // marked cells * h^n
  int refinement = 0;               // z/l lattice step = h / 2^refinement
  int band_min = 0, band_max = 0;   // bands of d over marked cell centers
};

struct CloudOptions {
  int initial_refinement = 0;  // start at step h
  int max_refinement = 3;      // stop refining here even if not stable
  bool refine_until_stable = true;
};

/// Precondition: Q in F_beta.
Cloud compute_cloud(const Domain& dom, const Cube& q, const Rational& beta,
                    const CloudOptions& opts = {});

/// W_t(Q0): covering cubes meeting the cloud region; the union's measure.
/// Precondition: Q0 in F_beta and 10*Q0 not in F_beta.
struct NeighborReport {
  std::vector<std::size_t> members;  // indices into w.cubes
  std::int64_t cardinal = 0;
  double union_measure = 0;  // Lebesgue measure of the union of members
  double cloud_measure = 0;
  double base_measure = 0;
};
NeighborReport whitney_neighbors(const WhitneyCovering& w, const Domain& dom, const Cube& q0,
                                 const Rational& beta, const CloudOptions& opts = {});

/// Max over sampled cell centers of the number of covering clouds;
/// precondition: cubes pairwise disjoint and of Whitney's type
/// (c1 < l/d < c2).
struct OverlapReport {
  int max_overlap = 0;
  std::int64_t sampled_nodes = 0;
};
OverlapReport cloud_overlap_check(const Domain& dom, const std::vector<Cube>& cubes,
                                  const Rational& beta, const Rational& c1, const Rational& c2,
                                  const CloudOptions& opts = {});

}  // namespace lmax
