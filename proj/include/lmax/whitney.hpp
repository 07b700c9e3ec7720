#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "lmax/family.hpp"

namespace lmax {

enum class Provenance : std::uint8_t { kept_whole, subdivided_child };

/// Dyadic cube on the standard lattice: corners at j * 2^(-s), half-side
/// 2^(-s-1). Scale s may be negative (large cubes).
struct DyadicCube {
  int scale = 0;
  std::array<std::int64_t, kMaxDim> idx{};

  Cube to_cube(int n) const {
    Cube q;
    q.center.n = n;
    for (int i = 0; i < n; ++i)
      q.center.x[i] = Dyadic::from_parts(2 * idx[i] + 1, -scale - 1);
    q.half = Dyadic::pow2(-scale - 1);
    return q;
  }
  DyadicCube child(int n, int m) const {
    DyadicCube c;
    c.scale = scale + 1;
    for (int i = 0; i < n; ++i) c.idx[i] = 2 * idx[i] + (((m >> i) & 1) ? 1 : 0);
    return c;
  }
  DyadicCube parent(int n) const {
    DyadicCube p;
    p.scale = scale - 1;
    for (int i = 0; i < n; ++i) p.idx[i] = idx[i] >> 1;
    return p;
  }
  bool operator==(const DyadicCube& o) const { return scale == o.scale && idx == o.idx; }
};

struct WhitneyCube {
  DyadicCube cube;
  int band = 0;  // the E_k it was assigned to
  Provenance prov = Provenance::kept_whole;
};

/// The covering W_t = union of E_k: pairwise disjoint dyadic cubes of
/// half-side 2^(k-t-2) per band, each with 10R in F_beta and
/// 2^(-t-3) d(x_R) <= l_R <= 2^(-t-1) d(x_R).
struct WhitneyCovering {
  int t = 0;
  Rational beta;
  int band_floor = 0;  // construction truncated below this band (node scale)
  std::vector<WhitneyCube> cubes;
  std::int64_t certification_giveups = 0;  // boxes whose band test hit the depth cap

  int scale_for_band(int k) const { return t + 1 - k; }
  Dyadic half_side_for_band(int k) const { return Dyadic::pow2(k - t - 2); }
};

struct WhitneyBuildOptions {
  /// Lowest band to construct; by default the band of the smallest positive
  /// node distance, which suffices for node-exhaustive coverage. The
  /// continuum family is infinite near the boundary.
  std::optional<int> band_floor;
};

/// Builds W_t literally as in the band construction: per band k, dyadic
/// cubes of half-side 2^(k-t-2) certified to meet Omega_k are kept whole
/// when they do not reach Omega_{k-1} (exact min-distance test) and are
/// otherwise subdivided into their 2^n children, pushed to E_{k-1}.
/// Precondition 2^-t <= beta/5.
WhitneyCovering build_whitney(const Domain& dom, const Rational& beta, int t,
                              const WhitneyBuildOptions& opts = {});

/// Exhaustive node checks: every interior lattice node in exactly one cube
/// (half-open convention), no nested pairs.
struct CoverageReport {
  bool covered = true;
  bool disjoint = true;
  std::int64_t interior_nodes = 0;
  std::int64_t covered_nodes = 0;
  std::int64_t multi_covered = 0;
};
CoverageReport check_coverage(const WhitneyCovering& w, const Domain& dom);

/// Lemma invariants, exact dyadic arithmetic: (i) 10R in F_beta and the
/// l/d sandwich; band sandwich 2^(k-1) < d(x) <= 2^(k+1).
struct InvariantReport {
  bool property_i = true;
  bool band_sandwich = true;
  std::string first_violation;
};
InvariantReport check_invariants(const WhitneyCovering& w, const Domain& dom);

/// All covering cubes whose closed point set meets a closed box.
std::vector<std::size_t> cubes_meeting_box(const WhitneyCovering& w, const Domain& dom,
                                           const std::array<Dyadic, kMaxDim>& blo,
                                           const std::array<Dyadic, kMaxDim>& bhi);

}  // namespace lmax
