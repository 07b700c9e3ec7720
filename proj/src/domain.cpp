#include "lmax/domain.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "lmax/errors.hpp"

namespace lmax {

std::string kind_name(DomainKind k) {
  switch (k) {
    case DomainKind::punctured_space: return "punctured_space";
    case DomainKind::half_space: return "half_space";
    case DomainKind::open_box: return "open_box";
    case DomainKind::box_annulus: return "box_annulus";
    case DomainKind::mask: return "mask";
  }
  return "?";
}

void Domain::init_grid(Point lo, Point hi, Dyadic h, int n) {
  if (n < 1 || n > kMaxDim) throw std::invalid_argument("domain: dimension must be 1..3");
  if (!(h > Dyadic(0))) throw std::invalid_argument("domain: h must be positive");
  n_ = n;
  lo_ = lo;
  hi_ = hi;
  h_ = h;
  for (int i = 0; i < n_; ++i) {
    Dyadic ext = hi.x[i] - lo.x[i];
    if (!(ext > Dyadic(0))) throw std::invalid_argument("domain: empty bounding box");
    long long cells = Dyadic::floor_div(ext, h);
    if (!(h.mul_ll(cells) == ext))
      throw std::invalid_argument("domain: bbox extent must be an integer number of cells");
    dims_[i] = cells;
  }
}

std::int64_t Domain::cell_count() const {
  std::int64_t c = 1;
  for (int i = 0; i < n_; ++i) c *= dims_[i];
  return c;
}

std::int64_t Domain::node_count() const {
  std::int64_t c = 1;
  for (int i = 0; i < n_; ++i) c *= dims_[i] + 1;
  return c;
}

Point Domain::node_point(const std::array<std::int64_t, kMaxDim>& idx) const {
  Point p;
  p.n = n_;
  for (int i = 0; i < n_; ++i) p.x[i] = lo_.x[i] + h_.mul_ll(idx[i]);
  return p;
}

Point Domain::cell_center(const std::array<std::int64_t, kMaxDim>& idx) const {
  Point p;
  p.n = n_;
  for (int i = 0; i < n_; ++i)
    p.x[i] = lo_.x[i] + h_.mul_ll(2 * idx[i] + 1).div_pow2(1);
  return p;
}

std::int64_t Domain::node_flat(const std::array<std::int64_t, kMaxDim>& idx) const {
  std::int64_t f = 0;
  for (int i = 0; i < n_; ++i) f = f * (dims_[i] + 1) + idx[i];
  return f;
}

std::int64_t Domain::cell_flat(const std::array<std::int64_t, kMaxDim>& idx) const {
  std::int64_t f = 0;
  for (int i = 0; i < n_; ++i) f = f * dims_[i] + idx[i];
  return f;
}

std::array<std::int64_t, kMaxDim> Domain::cell_unflat(std::int64_t flat) const {
  std::array<std::int64_t, kMaxDim> idx{};
  for (int i = n_ - 1; i >= 0; --i) {
    idx[i] = flat % dims_[i];
    flat /= dims_[i];
  }
  return idx;
}

std::array<std::int64_t, kMaxDim> Domain::node_unflat(std::int64_t flat) const {
  std::array<std::int64_t, kMaxDim> idx{};
  for (int i = n_ - 1; i >= 0; --i) {
    idx[i] = flat % (dims_[i] + 1);
    flat /= (dims_[i] + 1);
  }
  return idx;
}

bool Domain::in_bbox(const Point& p) const {
  for (int i = 0; i < n_; ++i)
    if (p.x[i] < lo_.x[i] || p.x[i] > hi_.x[i]) return false;
  return true;
}

Dyadic Domain::distance(const Point& p) const {
  if (p.n != n_) throw std::invalid_argument("distance: dimension mismatch");
  if (!in_bbox(p)) throw domain_error("distance: point outside bounding box");
  return distance_unchecked(p);
}

Dyadic Domain::distance_unchecked(const Point& p) const {
  if (kind_ == DomainKind::mask) {
    // Interiority first: points in the closed complement region report 0.
    // Interior means every cell whose closure contains p is an inside cell
    // and p is strictly inside the bbox.
    for (int i = 0; i < n_; ++i)
      if (!(p.x[i] > lo_.x[i]) || !(p.x[i] < hi_.x[i])) return Dyadic(0);
    std::array<std::int64_t, 2> lohi[kMaxDim];
    for (int i = 0; i < n_; ++i) {
      Dyadic off = p.x[i] - lo_.x[i];
      long long c_hi = Dyadic::floor_div(off, h_);  // cell to the right of p (or containing)
      bool on_face = h_.mul_ll(c_hi) == off;
      long long c_lo = on_face ? c_hi - 1 : c_hi;
      if (c_hi >= dims_[i]) c_hi = dims_[i] - 1;
      lohi[i] = {c_lo, c_hi};
    }
    std::array<std::int64_t, kMaxDim> idx{};
    // enumerate the up-to-2^n incident cells
    for (std::int64_t a = lohi[0][0]; a <= lohi[0][1]; ++a) {
      idx[0] = a;
      for (std::int64_t b = (n_ > 1 ? lohi[1][0] : 0); b <= (n_ > 1 ? lohi[1][1] : 0); ++b) {
        if (n_ > 1) idx[1] = b;
        for (std::int64_t c = (n_ > 2 ? lohi[2][0] : 0); c <= (n_ > 2 ? lohi[2][1] : 0); ++c) {
          if (n_ > 2) idx[2] = c;
          if (!cell_inside_[cell_flat(idx)]) return Dyadic(0);
        }
      }
    }
  }
  Dyadic best;
  bool first = true;
  for (const auto& b : comp_) {
    Dyadic d = dist_point_ibox(p, b);
    if (first || d < best) {
      best = d;
      first = false;
    }
    if (best.is_zero()) break;
  }
  return best;
}

Dyadic Domain::min_distance_box(const std::array<Dyadic, kMaxDim>& blo,
                                const std::array<Dyadic, kMaxDim>& bhi) const {
  if (kind_ == DomainKind::mask) {
    // comp_ holds only boundary complement cells; a box overlapping deeper
    // complement cells has min distance 0, so test cell overlap directly.
    std::array<std::int64_t, kMaxDim> clo{}, chi{};
    bool overlap = true;
    for (int i = 0; i < n_; ++i) {
      // closed cells [j*h,(j+1)*h] meeting the closed box
      clo[i] = std::max<std::int64_t>(0, Dyadic::ceil_div(blo[i] - lo_.x[i], h_) - 1);
      chi[i] = std::min<std::int64_t>(dims_[i] - 1, Dyadic::floor_div(bhi[i] - lo_.x[i], h_));
      if (clo[i] > chi[i]) overlap = false;
    }
    if (overlap) {
      std::array<std::int64_t, kMaxDim> idx{};
      for (std::int64_t a = clo[0]; a <= chi[0]; ++a) {
        idx[0] = a;
        for (std::int64_t b = (n_ > 1 ? clo[1] : 0); b <= (n_ > 1 ? chi[1] : 0); ++b) {
          if (n_ > 1) idx[1] = b;
          for (std::int64_t c = (n_ > 2 ? clo[2] : 0); c <= (n_ > 2 ? chi[2] : 0); ++c) {
            if (n_ > 2) idx[2] = c;
            if (!cell_inside_[cell_flat(idx)]) return Dyadic(0);
          }
        }
      }
    }
  }
  Dyadic best;
  bool first = true;
  for (const auto& b : comp_) {
    Dyadic d = dist_box_ibox(blo, bhi, b, n_);
    if (first || d < best) {
      best = d;
      first = false;
    }
    if (best.is_zero()) break;
  }
  return best;
}

Dyadic Domain::max_distance_box_bound(const std::array<Dyadic, kMaxDim>& blo,
                                      const std::array<Dyadic, kMaxDim>& bhi) const {
  Dyadic best;
  bool first = true;
  for (const auto& b : comp_) {
    Dyadic d = max_dist_box_ibox(blo, bhi, b, n_);
    if (first || d < best) {
      best = d;
      first = false;
    }
  }
  return best;
}

std::optional<Point> Domain::witness_distance_at_least(const std::array<Dyadic, kMaxDim>& blo,
                                                       const std::array<Dyadic, kMaxDim>& bhi,
                                                       const Dyadic& theta, int depth) const {
  auto probe = [&](const Point& p) -> bool { return !(distance_unchecked(p) < theta); };

  Point mid;
  mid.n = n_;
  for (int i = 0; i < n_; ++i) mid.x[i] = (blo[i] + bhi[i]).div_pow2(1);
  if (probe(mid)) return mid;

  // corners
  int corners = 1 << n_;
  for (int c = 0; c < corners; ++c) {
    Point p;
    p.n = n_;
    for (int i = 0; i < n_; ++i) p.x[i] = (c >> i) & 1 ? bhi[i] : blo[i];
    if (probe(p)) return p;
  }
  // per-component farthest point (argmax of the component's own distance)
  for (const auto& b : comp_) {
    Point p;
    p.n = n_;
    for (int i = 0; i < n_; ++i) {
      Dyadic glo = axis_gap(blo[i], b, i), ghi = axis_gap(bhi[i], b, i);
      p.x[i] = ghi > glo ? bhi[i] : blo[i];
    }
    if (probe(p)) return p;
  }
  // lattice nodes inside the box (precomputed exact distances)
  {
    std::array<std::int64_t, kMaxDim> nlo{}, nhi{};
    bool any = true;
    for (int i = 0; i < n_; ++i) {
      nlo[i] = std::max<std::int64_t>(0, Dyadic::ceil_div(blo[i] - lo_.x[i], h_));
      nhi[i] = std::min<std::int64_t>(dims_[i], Dyadic::floor_div(bhi[i] - lo_.x[i], h_));
      if (nlo[i] > nhi[i]) any = false;
    }
    if (any) {
      std::array<std::int64_t, kMaxDim> idx{};
      for (std::int64_t a = nlo[0]; a <= nhi[0]; ++a) {
        idx[0] = a;
        for (std::int64_t b = (n_ > 1 ? nlo[1] : 0); b <= (n_ > 1 ? nhi[1] : 0); ++b) {
          if (n_ > 1) idx[1] = b;
          for (std::int64_t c = (n_ > 2 ? nlo[2] : 0); c <= (n_ > 2 ? nhi[2] : 0); ++c) {
            if (n_ > 2) idx[2] = c;
            if (!(node_dist_[node_flat(idx)] < theta)) return node_point(idx);
          }
        }
      }
    }
  }
  if (depth <= 0) return std::nullopt;
  if (max_distance_box_bound(blo, bhi) < theta) return std::nullopt;  // sound prune
  // split along the widest axis
  int axis = 0;
  Dyadic wmax = bhi[0] - blo[0];
  for (int i = 1; i < n_; ++i) {
    Dyadic w = bhi[i] - blo[i];
    if (w > wmax) {
      wmax = w;
      axis = i;
    }
  }
  auto mlo = blo, mhi = bhi;
  Dyadic cut = (blo[axis] + bhi[axis]).div_pow2(1);
  mhi[axis] = cut;
  if (auto r = witness_distance_at_least(mlo, mhi, theta, depth - 1)) return r;
  mhi[axis] = bhi[axis];
  mlo[axis] = cut;
  return witness_distance_at_least(mlo, mhi, theta, depth - 1);
}

Dyadic Domain::max_node_distance() const {
  Dyadic m;
  for (const auto& d : node_dist_)
    if (d > m) m = d;
  return m;
}

Dyadic Domain::min_positive_node_distance() const {
  Dyadic m;
  bool first = true;
  for (const auto& d : node_dist_) {
    if (d.sign() <= 0) continue;
    if (first || d < m) {
      m = d;
      first = false;
    }
  }
  if (first) throw domain_error("domain has no interior node");
  return m;
}

void Domain::build_node_field() {
  node_dist_.resize(node_count());
  std::array<std::int64_t, kMaxDim> idx{};
  for (std::int64_t f = 0; f < node_count(); ++f) {
    idx = node_unflat(f);
    node_dist_[f] = distance_unchecked(node_point(idx));
  }
  cell_dist_.resize(cell_count());
  for (std::int64_t f = 0; f < cell_count(); ++f)
    cell_dist_[f] = distance_unchecked(cell_center(cell_unflat(f)));
}

void Domain::build_mask_structures() {
  // complement nodes: not interior w.r.t. the closed inside cells
  std::int64_t nn = node_count();
  node_hops_.assign(nn, -1);
  std::deque<std::int64_t> queue;
  for (std::int64_t f = 0; f < nn; ++f) {
    auto idx = node_unflat(f);
    bool comp = false;
    for (int i = 0; i < n_ && !comp; ++i)
      if (idx[i] == 0 || idx[i] == dims_[i]) comp = true;  // bbox faces
    if (!comp) {
      // incident cells: idx[i]-1 and idx[i] per axis
      std::array<std::int64_t, kMaxDim> c{};
      int combos = 1 << n_;
      for (int m = 0; m < combos && !comp; ++m) {
        for (int i = 0; i < n_; ++i) c[i] = idx[i] - (((m >> i) & 1) ? 1 : 0);
        bool ok = true;
        for (int i = 0; i < n_; ++i)
          if (c[i] < 0 || c[i] >= dims_[i]) ok = false;
        if (ok && !cell_inside_[cell_flat(c)]) comp = true;
      }
    }
    if (comp) {
      node_hops_[f] = 0;
      queue.push_back(f);
    }
  }
  if (queue.empty()) throw domain_error("mask domain: complement is empty (not proper)");
  // multi-source Chebyshev BFS (8/26-neighborhood)
  while (!queue.empty()) {
    std::int64_t f = queue.front();
    queue.pop_front();
    auto idx = node_unflat(f);
    std::array<std::int64_t, kMaxDim> nb{};
    int steps[3] = {-1, 0, 1};
    for (int a = 0; a < 3; ++a) {
      nb[0] = idx[0] + steps[a];
      if (nb[0] < 0 || nb[0] > dims_[0]) continue;
      for (int b = (n_ > 1 ? 0 : 1); b < (n_ > 1 ? 3 : 2); ++b) {
        if (n_ > 1) {
          nb[1] = idx[1] + steps[b];
          if (nb[1] < 0 || nb[1] > dims_[1]) continue;
        }
        for (int c = (n_ > 2 ? 0 : 1); c < (n_ > 2 ? 3 : 2); ++c) {
          if (n_ > 2) {
            nb[2] = idx[2] + steps[c];
            if (nb[2] < 0 || nb[2] > dims_[2]) continue;
          }
          std::int64_t g = node_flat(nb);
          if (node_hops_[g] < 0) {
            node_hops_[g] = node_hops_[f] + 1;
            queue.push_back(g);
          }
        }
      }
    }
  }

  // complement boxes: bbox slabs + boundary complement cells (complement
  // cells with an inside vertex-neighbor). Sufficient for exact distances
  // of interior points; deep-complement points short-circuit to 0.
  for (int i = 0; i < n_; ++i) {
    IBox slab = IBox::all(n_);
    slab.hi_inf[i] = false;
    slab.hi[i] = lo_.x[i];
    comp_.push_back(slab);
    IBox slab2 = IBox::all(n_);
    slab2.lo_inf[i] = false;
    slab2.lo[i] = hi_.x[i];
    comp_.push_back(slab2);
  }
  std::int64_t nc = cell_count();
  for (std::int64_t f = 0; f < nc; ++f) {
    if (cell_inside_[f]) continue;
    auto idx = cell_unflat(f);
    bool boundary = false;
    std::array<std::int64_t, kMaxDim> nb{};
    int steps[3] = {-1, 0, 1};
    for (int a = 0; a < 3 && !boundary; ++a) {
      nb[0] = idx[0] + steps[a];
      if (nb[0] < 0 || nb[0] >= dims_[0]) continue;
      for (int b = (n_ > 1 ? 0 : 1); b < (n_ > 1 ? 3 : 2) && !boundary; ++b) {
        if (n_ > 1) {
          nb[1] = idx[1] + steps[b];
          if (nb[1] < 0 || nb[1] >= dims_[1]) continue;
        }
        for (int c = (n_ > 2 ? 0 : 1); c < (n_ > 2 ? 3 : 2) && !boundary; ++c) {
          if (n_ > 2) {
            nb[2] = idx[2] + steps[c];
            if (nb[2] < 0 || nb[2] >= dims_[2]) continue;
          }
          if (cell_inside_[cell_flat(nb)]) boundary = true;
        }
      }
    }
    if (boundary) {
      IBox b;
      b.n = n_;
      for (int i = 0; i < n_; ++i) {
        b.lo[i] = lo_.x[i] + h_.mul_ll(idx[i]);
        b.hi[i] = lo_.x[i] + h_.mul_ll(idx[i] + 1);
      }
      comp_.push_back(b);
    }
  }
}

void Domain::validate() const {
  bool any_inside = false, any_outside = comp_.empty() ? false : true;
  for (std::int64_t f = 0; f < cell_count(); ++f)
    if (cell_inside_[f]) any_inside = true;
  if (!any_inside) throw domain_error("domain: no interior cell (empty)");
  if (!any_outside) throw domain_error("domain: complement is empty (not proper)");
}

// --- factories ---

std::shared_ptr<Domain> Domain::punctured_space(int n, Point puncture, Point bbox_lo,
                                                Point bbox_hi, Dyadic h) {
  auto d = std::shared_ptr<Domain>(new Domain());
  d->kind_ = DomainKind::punctured_space;
  d->init_grid(bbox_lo, bbox_hi, h, n);
  d->puncture_ = puncture;
  d->comp_.push_back(IBox::point(puncture));
  d->cell_inside_.assign(d->cell_count(), 1);
  // cells whose closure contains the puncture are still "inside" the open
  // set minus a point for measure purposes; interiority is via distance.
  d->build_node_field();
  d->validate();
  return d;
}

std::shared_ptr<Domain> Domain::half_space(int n, int axis, Dyadic offset, Point bbox_lo,
                                           Point bbox_hi, Dyadic h) {
  if (axis < 0 || axis >= n) throw std::invalid_argument("half_space: bad axis");
  auto d = std::shared_ptr<Domain>(new Domain());
  d->kind_ = DomainKind::half_space;
  d->init_grid(bbox_lo, bbox_hi, h, n);
  d->hs_axis_ = axis;
  d->hs_offset_ = offset;
  IBox slab = IBox::all(n);
  slab.hi_inf[axis] = false;
  slab.hi[axis] = offset;
  d->comp_.push_back(slab);
  d->cell_inside_.assign(d->cell_count(), 0);
  for (std::int64_t f = 0; f < d->cell_count(); ++f) {
    auto idx = d->cell_unflat(f);
    Dyadic cell_lo = bbox_lo.x[axis] + h.mul_ll(idx[axis]);
    d->cell_inside_[f] = !(cell_lo < offset) ? 1 : 0;
  }
  d->build_node_field();
  d->validate();
  return d;
}

std::shared_ptr<Domain> Domain::open_box(int n, Point lo, Point hi, Dyadic h) {
  auto d = std::shared_ptr<Domain>(new Domain());
  d->kind_ = DomainKind::open_box;
  d->init_grid(lo, hi, h, n);
  for (int i = 0; i < n; ++i) {
    IBox s1 = IBox::all(n);
    s1.hi_inf[i] = false;
    s1.hi[i] = lo.x[i];
    d->comp_.push_back(s1);
    IBox s2 = IBox::all(n);
    s2.lo_inf[i] = false;
    s2.lo[i] = hi.x[i];
    d->comp_.push_back(s2);
  }
  d->cell_inside_.assign(d->cell_count(), 1);
  d->build_node_field();
  d->validate();
  return d;
}

std::shared_ptr<Domain> Domain::punctured_box(int n, Point lo, Point hi, Point puncture,
                                              Dyadic h) {
  auto d = open_box(n, lo, hi, h);
  for (int i = 0; i < n; ++i)
    if (!(puncture.x[i] > lo.x[i]) || !(puncture.x[i] < hi.x[i]))
      throw std::invalid_argument("punctured_box: puncture must be interior");
  d->puncture_ = puncture;
  d->comp_.push_back(IBox::point(puncture));
  d->build_node_field();  // rebuild with the puncture present
  return d;
}

std::shared_ptr<Domain> Domain::box_annulus(int n, Point lo, Point hi, Point inner_lo,
                                            Point inner_hi, Dyadic h) {
  auto d = std::shared_ptr<Domain>(new Domain());
  d->kind_ = DomainKind::box_annulus;
  d->init_grid(lo, hi, h, n);
  d->inner_lo_ = inner_lo;
  d->inner_hi_ = inner_hi;
  for (int i = 0; i < n; ++i) {
    if (!(inner_lo.x[i] > lo.x[i]) || !(inner_hi.x[i] < hi.x[i]) ||
        !(inner_lo.x[i] < inner_hi.x[i]))
      throw std::invalid_argument("box_annulus: inner box must be strictly inside");
    IBox s1 = IBox::all(n);
    s1.hi_inf[i] = false;
    s1.hi[i] = lo.x[i];
    d->comp_.push_back(s1);
    IBox s2 = IBox::all(n);
    s2.lo_inf[i] = false;
    s2.lo[i] = hi.x[i];
    d->comp_.push_back(s2);
  }
  IBox inner;
  inner.n = n;
  inner.lo = inner_lo.x;
  inner.hi = inner_hi.x;
  d->comp_.push_back(inner);
  d->cell_inside_.assign(d->cell_count(), 1);
  for (std::int64_t f = 0; f < d->cell_count(); ++f) {
    auto idx = d->cell_unflat(f);
    bool in_inner = true;
    for (int i = 0; i < n && in_inner; ++i) {
      Dyadic clo = lo.x[i] + h.mul_ll(idx[i]), chi = lo.x[i] + h.mul_ll(idx[i] + 1);
      // cell counts as removed when it overlaps the closed inner box
      if (!(chi > inner_lo.x[i]) || !(clo < inner_hi.x[i])) in_inner = false;
    }
    if (in_inner) d->cell_inside_[f] = 0;
  }
  d->build_node_field();
  d->validate();
  return d;
}

std::shared_ptr<Domain> Domain::from_mask(int n, std::array<std::int64_t, kMaxDim> dims,
                                          std::vector<std::uint8_t> inside, Point bbox_lo,
                                          Dyadic h) {
  auto d = std::shared_ptr<Domain>(new Domain());
  d->kind_ = DomainKind::mask;
  Point hi = bbox_lo;
  for (int i = 0; i < n; ++i) hi.x[i] = bbox_lo.x[i] + h.mul_ll(dims[i]);
  hi.n = n;
  d->init_grid(bbox_lo, hi, h, n);
  for (int i = 0; i < n; ++i)
    if (d->dims_[i] != dims[i]) throw std::invalid_argument("mask: dims mismatch");
  if (static_cast<std::int64_t>(inside.size()) != d->cell_count())
    throw std::invalid_argument("mask: payload size mismatch");
  d->cell_inside_ = std::move(inside);
  d->build_mask_structures();
  d->build_node_field();
  d->validate();
  return d;
}

}  // namespace lmax
