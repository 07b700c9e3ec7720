#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lmax/geom.hpp"

namespace lmax {

enum class DomainKind { punctured_space, half_space, open_box, box_annulus, mask };

std::string kind_name(DomainKind k);

/// A proper open subset of R^n with the d_inf distance-to-complement field.
///
/// The grid has dims[i] cells of side h per axis inside the bounding box;
/// lattice nodes sit at bbox.lo + i*h (dims[i]+1 per axis) and carry the
/// exact distance field. Scalar fields live on cells and are sampled at
/// cell centers, which keeps sampling sites off analytic singularities.
///
/// For every kind the complement is a finite union of (possibly unbounded)
/// axis boxes, so distances and distance ranges over boxes are exact in
/// dyadic arithmetic. Unbounded analytic kinds are clipped to the bounding
/// box for enumeration only; the distance uses the true closed form.
class Domain {
 public:
  // --- factories ---
  static std::shared_ptr<Domain> punctured_space(int n, Point puncture, Point bbox_lo,
                                                 Point bbox_hi, Dyadic h);
  static std::shared_ptr<Domain> half_space(int n, int axis, Dyadic offset, Point bbox_lo,
                                            Point bbox_hi, Dyadic h);
  static std::shared_ptr<Domain> open_box(int n, Point lo, Point hi, Dyadic h);
  /// Open box minus an interior point ("punctured square"): shape parameter
  /// of the open_box kind in the domain spec files.
  static std::shared_ptr<Domain> punctured_box(int n, Point lo, Point hi, Point puncture,
                                               Dyadic h);
  static std::shared_ptr<Domain> box_annulus(int n, Point lo, Point hi, Point inner_lo,
                                             Point inner_hi, Dyadic h);
  static std::shared_ptr<Domain> from_mask(int n, std::array<std::int64_t, kMaxDim> dims,
                                           std::vector<std::uint8_t> inside, Point bbox_lo,
                                           Dyadic h);

  DomainKind kind() const { return kind_; }
  int dim() const { return n_; }
  const Dyadic& h() const { return h_; }
  const Point& bbox_lo() const { return lo_; }
  const Point& bbox_hi() const { return hi_; }
  const std::array<std::int64_t, kMaxDim>& dims() const { return dims_; }
  std::int64_t cell_count() const;
  std::int64_t node_count() const;
  const std::vector<IBox>& complement_boxes() const { return comp_; }
  bool bounded() const { return kind_ != DomainKind::punctured_space && kind_ != DomainKind::half_space; }

  // --- coordinates ---
  Point node_point(const std::array<std::int64_t, kMaxDim>& idx) const;
  Point cell_center(const std::array<std::int64_t, kMaxDim>& idx) const;
  std::int64_t node_flat(const std::array<std::int64_t, kMaxDim>& idx) const;
  std::int64_t cell_flat(const std::array<std::int64_t, kMaxDim>& idx) const;
  std::array<std::int64_t, kMaxDim> cell_unflat(std::int64_t flat) const;
  std::array<std::int64_t, kMaxDim> node_unflat(std::int64_t flat) const;
  bool in_bbox(const Point& p) const;

  // --- distance field ---
  /// Exact d_inf(x, complement). Throws domain_error outside the bbox.
  Dyadic distance(const Point& p) const;
  /// Same value without the bbox precondition (internal use).
  Dyadic distance_unchecked(const Point& p) const;
  const Dyadic& node_distance(std::int64_t flat) const { return node_dist_[flat]; }
  const std::vector<Dyadic>& node_distances() const { return node_dist_; }
  /// Exact distance at cell centers (precomputed; the family-test hot path).
  const Dyadic& cell_center_distance(std::int64_t flat) const { return cell_dist_[flat]; }
  /// Chebyshev BFS hop counts on lattice nodes (mask kinds; for analytic
  /// kinds derived from rasterized interiority, used only in tests).
  const std::vector<std::int32_t>& node_hops() const { return node_hops_; }

  bool interior(const Point& p) const { return distance_unchecked(p).sign() > 0; }
  bool cell_inside(std::int64_t flat) const { return cell_inside_[flat] != 0; }

  /// Exact min of d over a closed box.
  Dyadic min_distance_box(const std::array<Dyadic, kMaxDim>& blo,
                          const std::array<Dyadic, kMaxDim>& bhi) const;
  /// Sound upper bound for max of d over a closed box (exact per
  /// complement component, min over components).
  Dyadic max_distance_box_bound(const std::array<Dyadic, kMaxDim>& blo,
                                const std::array<Dyadic, kMaxDim>& bhi) const;
  /// Certified witness z in the box with d(z) >= theta, if one is found:
  /// probes box corners, center, per-component extremal points and lattice
  /// nodes, then branch-and-bound. A nullopt answer is conservative.
  std::optional<Point> witness_distance_at_least(const std::array<Dyadic, kMaxDim>& blo,
                                                 const std::array<Dyadic, kMaxDim>& bhi,
                                                 const Dyadic& theta, int depth = 10) const;

  /// Largest / smallest positive node distance (band range helpers).
  Dyadic max_node_distance() const;
  Dyadic min_positive_node_distance() const;

  void validate() const;

 private:
  Domain() = default;
  void init_grid(Point lo, Point hi, Dyadic h, int n);
  void build_node_field();
  void build_mask_structures();

  int n_ = 0;
  DomainKind kind_{};
  Point lo_{}, hi_{};
  Dyadic h_{};
  std::array<std::int64_t, kMaxDim> dims_{};

  // kind parameters
  Point puncture_{};
  int hs_axis_ = 0;
  Dyadic hs_offset_{};
  Point inner_lo_{}, inner_hi_{};

  std::vector<std::uint8_t> cell_inside_;  // all kinds: rasterized interiority per cell
  std::vector<IBox> comp_;                 // complement as boxes (exact for distance)
  std::vector<Dyadic> node_dist_;
  std::vector<Dyadic> cell_dist_;
  std::vector<std::int32_t> node_hops_;
};

}  // namespace lmax
