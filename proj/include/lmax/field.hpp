#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "lmax/domain.hpp"
#include "lmax/family.hpp"

namespace lmax {

/// Snapped cube: the maximal block of whole grid cells inside the cube
/// (shrink-to-fit). empty() when no whole cell fits.
struct CellRange {
  std::array<std::int64_t, kMaxDim> lo{}, hi{};  // half-open [lo, hi)
  int n = 0;

  bool empty() const {
    for (int i = 0; i < n; ++i)
      if (lo[i] >= hi[i]) return true;
    return false;
  }
  std::int64_t count() const {
    if (empty()) return 0;
    std::int64_t c = 1;
    for (int i = 0; i < n; ++i) c *= hi[i] - lo[i];
    return c;
  }
};

/// The documented average contract: fl(S) * 2^eq / fl(count). Both the
/// operator kernels and the independent test oracles use this exact formula
/// on exact integer sums, so equal sums give bit-identical doubles.
inline double quanta_average(__int128 sum, std::int64_t count, int eq) {
  long double s = static_cast<long double>(sum);
  return static_cast<double>(std::ldexp(static_cast<double>(s), eq) / static_cast<double>(count));
}

/// Nonnegative grid function sampled per cell, with an exact integer
/// summed-area table.
///
/// Samples are quantized once at construction to multiples of 2^eq with
/// eq chosen 44 bits below the field maximum; all cube integrals are then
/// exact integer sums (table and direct Riemann sums agree exactly), while
/// the stored double samples keep full precision for pointwise operations.
class ScalarField {
 public:
  ScalarField() = default;  // empty; assign from a factory before use

  static ScalarField constant(std::shared_ptr<const Domain> dom, double value);
  static ScalarField from_cells(std::shared_ptr<const Domain> dom, std::vector<double> samples);
  static ScalarField from_function(std::shared_ptr<const Domain> dom,
                                   const std::function<double(const Point&)>& f);
  /// |x - center|_inf^alpha, cell values by exact antiderivative in n=1 and
  /// midpoint with a Richardson refinement in n>=2 (plain midpoint on cells
  /// where the refinement is unstable near the singularity).
  static ScalarField power(std::shared_ptr<const Domain> dom, double alpha, const Point& center);
  /// Indicator-masked copy: samples kept on cells of the range, 0 elsewhere.
  ScalarField restricted(const CellRange& r) const;
  ScalarField restricted_mask(const std::vector<std::uint8_t>& cells) const;
  /// Pointwise product (for sigma-weighted averages).
  static ScalarField product(const ScalarField& a, const ScalarField& b);
  /// Pointwise power of the samples.
  ScalarField pow_samples(double expo) const;

  const Domain& domain() const { return *dom_; }
  std::shared_ptr<const Domain> domain_ptr() const { return dom_; }
  std::int64_t cells() const { return static_cast<std::int64_t>(s_.size()); }
  double sample(std::int64_t flat) const { return s_[flat]; }
  const std::vector<double>& samples() const { return s_; }
  int quantum_exp() const { return eq_; }
  double quantum() const { return std::ldexp(1.0, eq_); }

  CellRange snap(const Cube& q) const;
  CellRange full_range() const;
  /// Exact integer sum of quanta over a snapped range (summed-area table).
  __int128 range_sum(const CellRange& r) const;
  /// Direct-loop sum, same integers; used by oracles and the exactness test.
  __int128 range_sum_direct(const CellRange& r) const;

  /// integral = sum * 2^eq * h^n over the snapped cube. Throws domain_error
  /// if the cube misses the bounding box entirely.
  double integrate(const Cube& q) const;
  double integrate(const CellRange& r) const;
  /// Average over the snapped cube by the quanta_average contract.
  double average(const CellRange& r) const;

  double cell_volume() const { return cell_vol_; }
  double max_sample() const { return max_; }
  double min_sample() const { return min_; }

 private:
  void build();

  std::shared_ptr<const Domain> dom_;
  std::vector<double> s_;
  std::vector<std::int64_t> q_;
  std::vector<__int128> sat_;
  int eq_ = 0;
  double cell_vol_ = 0, max_ = 0, min_ = 0;
};

struct DualWeightResult {
  ScalarField sigma;
  std::int64_t floored_cells = 0;
  double eps_floor = 0;
};

/// sigma = max(v, eps_floor)^(-1/(p-1)). Throws singular_weight_error when
/// eps_floor = 0 and v vanishes somewhere.
DualWeightResult dual_weight(const ScalarField& v, double p, double eps_floor = 1e-12);

}  // namespace lmax
