#include "lmax/field.hpp"

#include <algorithm>
#include <cmath>

#include "lmax/errors.hpp"

namespace lmax {

namespace {

// exact mean of |t - c|^alpha over [a, b] (1-D cell), midpoint fallback when
// the antiderivative is singular inside.
double power_cell_mean_1d(double a, double b, double c, double alpha) {
  double lo = a - c, hi = b - c;
  auto anti = [&](double t) {  // antiderivative of |t|^alpha
    if (alpha == -1.0) return t >= 0 ? std::log(std::max(t, 1e-300)) : -std::log(std::max(-t, 1e-300));
    double p = alpha + 1.0;
    return (t >= 0 ? 1.0 : -1.0) * std::pow(std::abs(t), p) / p;
  };
  bool crosses = lo < 0 && hi > 0;
  if ((crosses || lo == 0 || hi == 0) && alpha <= -1.0) {
    double m = 0.5 * (a + b);  // midpoint: the discrete model near the singularity
    return std::pow(std::abs(m - c), alpha);
  }
  return (anti(hi) - anti(lo)) / (b - a);
}

}  // namespace

void ScalarField::build() {
  const int n = dom_->dim();
  max_ = 0;
  min_ = std::numeric_limits<double>::infinity();
  for (double v : s_) {
    if (!(v >= 0) || !std::isfinite(v))
      throw usage_error("field: samples must be finite and nonnegative");
    max_ = std::max(max_, v);
    min_ = std::min(min_, v);
  }
  if (s_.empty()) min_ = 0;
  eq_ = max_ > 0 ? std::ilogb(max_) + 1 - 44 : 0;
  q_.resize(s_.size());
  for (std::size_t i = 0; i < s_.size(); ++i) {
    double scaled = std::ldexp(s_[i], -eq_);
    q_[i] = static_cast<std::int64_t>(std::llround(scaled));
  }
  double hv = dom_->h().to_double();
  cell_vol_ = 1;
  for (int i = 0; i < n; ++i) cell_vol_ *= hv;

  // (dims+1)-sized inclusion-exclusion prefix table; unused axes behave as
  // a single cell
  const auto& dims = dom_->dims();
  std::array<std::int64_t, kMaxDim> ext{2, 2, 2};
  for (int i = 0; i < n; ++i) ext[i] = dims[i] + 1;
  sat_.assign(ext[0] * ext[1] * ext[2], 0);
  auto sat_at = [&](std::int64_t i, std::int64_t j, std::int64_t k) -> __int128& {
    return sat_[(i * ext[1] + j) * ext[2] + k];
  };
  std::array<std::int64_t, kMaxDim> c{0, 0, 0};
  std::array<std::int64_t, kMaxDim> top{dims[0], n > 1 ? dims[1] : 1, n > 2 ? dims[2] : 1};
  for (c[0] = 0; c[0] < top[0]; ++c[0])
    for (c[1] = 0; c[1] < top[1]; ++c[1])
      for (c[2] = 0; c[2] < top[2]; ++c[2]) {
        std::int64_t flat = dom_->cell_flat(c);
        __int128 v = q_[flat];
        v += sat_at(c[0], c[1] + 1, c[2] + 1);
        v += sat_at(c[0] + 1, c[1], c[2] + 1);
        v += sat_at(c[0] + 1, c[1] + 1, c[2]);
        v -= sat_at(c[0], c[1], c[2] + 1);
        v -= sat_at(c[0], c[1] + 1, c[2]);
        v -= sat_at(c[0] + 1, c[1], c[2]);
        v += sat_at(c[0], c[1], c[2]);
        sat_at(c[0] + 1, c[1] + 1, c[2] + 1) = v;
      }
}

ScalarField ScalarField::constant(std::shared_ptr<const Domain> dom, double value) {
  ScalarField f;
  f.dom_ = std::move(dom);
  f.s_.assign(f.dom_->cell_count(), value);
  f.build();
  return f;
}

ScalarField ScalarField::from_cells(std::shared_ptr<const Domain> dom,
                                    std::vector<double> samples) {
  ScalarField f;
  f.dom_ = std::move(dom);
  if (static_cast<std::int64_t>(samples.size()) != f.dom_->cell_count())
    throw usage_error("field: sample count mismatch");
  f.s_ = std::move(samples);
  f.build();
  return f;
}

ScalarField ScalarField::from_function(std::shared_ptr<const Domain> dom,
                                       const std::function<double(const Point&)>& fn) {
  ScalarField f;
  f.dom_ = std::move(dom);
  std::int64_t nc = f.dom_->cell_count();
  f.s_.resize(nc);
  for (std::int64_t i = 0; i < nc; ++i) f.s_[i] = fn(f.dom_->cell_center(f.dom_->cell_unflat(i)));
  f.build();
  return f;
}

ScalarField ScalarField::power(std::shared_ptr<const Domain> dom, double alpha,
                               const Point& center) {
  const int n = dom->dim();
  ScalarField f;
  f.dom_ = dom;
  std::int64_t nc = dom->cell_count();
  f.s_.resize(nc);
  double h = dom->h().to_double();
  for (std::int64_t i = 0; i < nc; ++i) {
    auto idx = dom->cell_unflat(i);
    if (n == 1) {
      double a = dom->bbox_lo().x[0].to_double() + idx[0] * h;
      f.s_[i] = power_cell_mean_1d(a, a + h, center.x[0].to_double(), alpha);
      continue;
    }
    Point cc = dom->cell_center(idx);
    auto radius = [&](double dx0, double dx1, double dx2) {
      double r = 0;
      double off[3] = {dx0, dx1, dx2};
      for (int d = 0; d < n; ++d)
        r = std::max(r, std::abs(cc.x[d].to_double() + off[d] - center.x[d].to_double()));
      return r;
    };
    double mid = std::pow(radius(0, 0, 0), alpha);
    // one Richardson step on the 2^n subcell midpoints
    double quarter = h / 4;
    double sum = 0;
    int combos = 1 << n;
    for (int m = 0; m < combos; ++m)
      sum += std::pow(radius((m & 1) ? quarter : -quarter,
                             (m & 2) ? quarter : -quarter,
                             (m & 4) ? quarter : -quarter),
                      alpha);
    double refined = sum / combos;
    double extrap = refined + (refined - mid) / 3.0;
    // keep the midpoint model where refinement is unstable (singular cells)
    bool stable = std::isfinite(extrap) && extrap >= 0 &&
                  std::abs(refined - mid) <= 0.5 * std::max(mid, refined);
    f.s_[i] = stable ? extrap : mid;
  }
  f.build();
  return f;
}

ScalarField ScalarField::restricted(const CellRange& r) const {
  ScalarField f;
  f.dom_ = dom_;
  f.s_.assign(s_.size(), 0.0);
  const int n = dom_->dim();
  for (std::int64_t i = 0; i < cells(); ++i) {
    auto idx = dom_->cell_unflat(i);
    bool in = true;
    for (int d = 0; d < n; ++d)
      if (idx[d] < r.lo[d] || idx[d] >= r.hi[d]) in = false;
    if (in) f.s_[i] = s_[i];
  }
  f.build();
  return f;
}

ScalarField ScalarField::restricted_mask(const std::vector<std::uint8_t>& cells_mask) const {
  if (cells_mask.size() != s_.size()) throw usage_error("restricted_mask: size mismatch");
  ScalarField f;
  f.dom_ = dom_;
  f.s_.resize(s_.size());
  for (std::size_t i = 0; i < s_.size(); ++i) f.s_[i] = cells_mask[i] ? s_[i] : 0.0;
  f.build();
  return f;
}

ScalarField ScalarField::product(const ScalarField& a, const ScalarField& b) {
  if (a.cells() != b.cells()) throw usage_error("product: field shapes differ");
  ScalarField f;
  f.dom_ = a.dom_;
  f.s_.resize(a.s_.size());
  for (std::size_t i = 0; i < f.s_.size(); ++i) f.s_[i] = a.s_[i] * b.s_[i];
  f.build();
  return f;
}

ScalarField ScalarField::pow_samples(double expo) const {
  ScalarField f;
  f.dom_ = dom_;
  f.s_.resize(s_.size());
  for (std::size_t i = 0; i < s_.size(); ++i) f.s_[i] = std::pow(s_[i], expo);
  f.build();
  return f;
}

CellRange ScalarField::snap(const Cube& q) const {
  const int n = dom_->dim();
  CellRange r;
  r.n = n;
  bool outside = false;
  for (int i = 0; i < n; ++i) {
    Dyadic qlo = q.lo(i), qhi = q.hi(i);
    if (qhi < dom_->bbox_lo().x[i] || qlo > dom_->bbox_hi().x[i]) outside = true;
    r.lo[i] = std::max<std::int64_t>(0, Dyadic::ceil_div(qlo - dom_->bbox_lo().x[i], dom_->h()));
    r.hi[i] = std::min<std::int64_t>(dom_->dims()[i],
                                     Dyadic::floor_div(qhi - dom_->bbox_lo().x[i], dom_->h()));
    if (r.hi[i] < r.lo[i]) r.hi[i] = r.lo[i];
  }
  if (outside) throw domain_error("snap: cube outside the bounding box");
  return r;
}

CellRange ScalarField::full_range() const {
  CellRange r;
  r.n = dom_->dim();
  for (int i = 0; i < r.n; ++i) {
    r.lo[i] = 0;
    r.hi[i] = dom_->dims()[i];
  }
  return r;
}

__int128 ScalarField::range_sum(const CellRange& r) const {
  if (r.empty()) return 0;
  const int n = dom_->dim();
  const auto& dims = dom_->dims();
  std::array<std::int64_t, kMaxDim> ext{dims[0] + 1, n > 1 ? dims[1] + 1 : 2,
                                        n > 2 ? dims[2] + 1 : 2};
  auto sat_at = [&](std::int64_t i, std::int64_t j, std::int64_t k) -> __int128 {
    return sat_[(i * ext[1] + j) * ext[2] + k];
  };
  std::array<std::int64_t, kMaxDim> lo{r.lo[0], n > 1 ? r.lo[1] : 0, n > 2 ? r.lo[2] : 0};
  std::array<std::int64_t, kMaxDim> hi{r.hi[0], n > 1 ? r.hi[1] : 1, n > 2 ? r.hi[2] : 1};
  __int128 s = 0;
  for (int m = 0; m < 8; ++m) {
    std::int64_t i = (m & 1) ? lo[0] : hi[0];
    std::int64_t j = (m & 2) ? lo[1] : hi[1];
    std::int64_t k = (m & 4) ? lo[2] : hi[2];
    int bits = (m & 1 ? 1 : 0) + (m & 2 ? 1 : 0) + (m & 4 ? 1 : 0);
    s += (bits % 2 == 0 ? 1 : -1) * sat_at(i, j, k);
  }
  return s;
}

__int128 ScalarField::range_sum_direct(const CellRange& r) const {
  if (r.empty()) return 0;
  const int n = dom_->dim();
  __int128 s = 0;
  std::array<std::int64_t, kMaxDim> c{};
  for (c[0] = r.lo[0]; c[0] < r.hi[0]; ++c[0])
    for (c[1] = (n > 1 ? r.lo[1] : 0); c[1] < (n > 1 ? r.hi[1] : 1); ++c[1])
      for (c[2] = (n > 2 ? r.lo[2] : 0); c[2] < (n > 2 ? r.hi[2] : 1); ++c[2]) {
        std::array<std::int64_t, kMaxDim> idx{c[0], n > 1 ? c[1] : 0, n > 2 ? c[2] : 0};
        s += q_[dom_->cell_flat(idx)];
      }
  return s;
}

double ScalarField::integrate(const CellRange& r) const {
  return std::ldexp(static_cast<double>(static_cast<long double>(range_sum(r))), eq_) * cell_vol_;
}

double ScalarField::integrate(const Cube& q) const { return integrate(snap(q)); }

double ScalarField::average(const CellRange& r) const {
  std::int64_t c = r.count();
  if (c == 0) throw usage_error("average: empty snapped cube");
  return quanta_average(range_sum(r), c, eq_);
}

DualWeightResult dual_weight(const ScalarField& v, double p, double eps_floor) {
  if (!(p > 1)) throw usage_error("dual_weight: p must exceed 1");
  double expo = -1.0 / (p - 1.0);
  std::vector<double> s(v.cells());
  std::int64_t floored = 0;
  for (std::int64_t i = 0; i < v.cells(); ++i) {
    double x = v.sample(i);
    if (x < eps_floor || x == 0.0) {
      if (eps_floor == 0.0)
        throw singular_weight_error("dual_weight: zero sample with eps_floor = 0");
      x = eps_floor;
      ++floored;
    }
    s[i] = std::pow(x, expo);
  }
  return DualWeightResult{ScalarField::from_cells(v.domain_ptr(), std::move(s)), floored,
                          eps_floor};
}

}  // namespace lmax
