#include "lmax/maximal.hpp"

#include <algorithm>
#include <cmath>

#include "lmax/errors.hpp"
#include "lmax/parallel.hpp"

namespace lmax {

namespace {

// family cap in cells: the largest width that can possibly satisfy
// w*h/2 < beta * d anywhere
std::int64_t width_cap(const Domain& dom, const Rational& beta) {
  Dyadic dmax = dom.max_node_distance() + dom.h();  // node max + Lipschitz slack
  // w < 2*beta*dmax/h
  Dyadic num = dmax.mul_ll(2 * beta.num);
  std::int64_t w = Dyadic::floor_div(num, dom.h().mul_ll(beta.den));
  std::int64_t dim_cap = *std::max_element(dom.dims().begin(), dom.dims().begin() + dom.dim());
  return std::max<std::int64_t>(1, std::min(w, dim_cap));
}

bool family_member(const Domain& dom, const CellCube& cc, const Rational& beta) {
  return in_family_fast(dom, cc, beta);
}

bool truncated_member(const Domain& dom, const CellCube& cc, const Rational& beta) {
  return in_family_fast(dom, cc, beta) && !in_family_fast(dom, cc, beta.quartered());
}

}  // namespace

CandidateLattice CandidateLattice::dyadic_default(const Domain& dom, const Rational& beta) {
  CandidateLattice lat;
  std::int64_t cap = width_cap(dom, beta);
  for (std::int64_t w = 1; w <= cap; w *= 2) {
    lat.widths.push_back(w);
    if (w > 1 && w - 1 <= cap) lat.widths.push_back(w - 1);  // odd companions for doubling
    if (2 * w - 1 <= cap) lat.widths.push_back(2 * w - 1);
  }
  std::sort(lat.widths.begin(), lat.widths.end());
  lat.widths.erase(std::unique(lat.widths.begin(), lat.widths.end()), lat.widths.end());
  return lat;
}

CandidateLattice CandidateLattice::dense(const Domain& dom, const Rational& beta) {
  CandidateLattice lat;
  std::int64_t cap = width_cap(dom, beta);
  for (std::int64_t w = 1; w <= cap; ++w) lat.widths.push_back(w);
  return lat;
}

MaximalResult evaluate(const MaximalRequest& req) {
  const ScalarField& f = *req.f;
  const Domain& dom = f.domain();
  const int n = dom.dim();
  if (req.lattice.widths.empty()) throw usage_error("maximal: empty candidate lattice");
  if (req.mode == MaxMode::weighted && req.sigma == nullptr)
    throw usage_error("maximal: weighted mode needs sigma");
  if (req.mode == MaxMode::fractional && (req.alpha_frac < 0 || req.alpha_frac >= n))
    throw usage_error("maximal: fractional exponent must be in [0, n)");
  for (double v : f.samples())
    if (v < 0) throw usage_error("maximal: negative samples (pass |f|)");

  const std::int64_t nc = dom.cell_count();
  MaximalResult res;
  res.value.assign(nc, 0.0);
  res.witness.assign(nc, WitnessCube{});
  res.flagged.assign(nc, 1);

  // product field for sigma-averages
  const bool weighted = req.mode == MaxMode::weighted;
  std::optional<ScalarField> fsig;
  if (weighted) fsig = ScalarField::product(f, *req.sigma);

  const auto& dims = dom.dims();
  Rational quarter = req.beta.quartered();
  double hn = 1;
  for (int i = 0; i < n; ++i) hn *= dom.h().to_double();

  auto candidate_value = [&](const CellCube& cc, CellRange& r) -> std::optional<double> {
    r.n = n;
    for (int i = 0; i < n; ++i) {
      r.lo[i] = cc.a[i];
      r.hi[i] = cc.a[i] + cc.w;
    }
    std::int64_t cnt = r.count();
    if (cnt == 0) return std::nullopt;
    if (weighted) {
      __int128 s_sig = req.sigma->range_sum(r);
      if (s_sig == 0) return std::nullopt;  // sigma mass zero: skip candidate
      __int128 s_f = fsig->range_sum(r);
      long double num = std::ldexp(static_cast<double>(static_cast<long double>(s_f)),
                                   fsig->quantum_exp());
      long double den = std::ldexp(static_cast<double>(static_cast<long double>(s_sig)),
                                   req.sigma->quantum_exp());
      return static_cast<double>(num / den);
    }
    double avg = quanta_average(f.range_sum(r), cnt, f.quantum_exp());
    if (req.mode == MaxMode::fractional) {
      double volq = static_cast<double>(cnt) * hn;
      return avg * std::pow(volq, req.alpha_frac / n);
    }
    return avg;
  };

  // mode family predicate
  auto admissible = [&](const CellCube& cc) {
    switch (req.mode) {
      case MaxMode::truncated: return truncated_member(dom, cc, req.beta);
      default: return family_member(dom, cc, req.beta);
    }
  };

  if (req.mode == MaxMode::centered) {
    // odd widths centered at the evaluation cell
    std::vector<std::int64_t> eval;
    if (req.eval_cells) eval = *req.eval_cells;
    else {
      eval.resize(nc);
      for (std::int64_t i = 0; i < nc; ++i) eval[i] = i;
    }
    parallel_for(static_cast<long long>(eval.size()), [&](long long lo, long long hi) {
      for (long long e = lo; e < hi; ++e) {
        std::int64_t cell = eval[e];
        auto idx = dom.cell_unflat(cell);
        for (std::int64_t w : req.lattice.widths) {
          if (w % 2 == 0) continue;  // centered at a cell center: odd widths only
          CellCube cc;
          cc.w = w;
          bool in_grid = true;
          for (int i = 0; i < n; ++i) {
            cc.a[i] = idx[i] - (w - 1) / 2;
            if (cc.a[i] < 0 || cc.a[i] + w > dims[i]) in_grid = false;
          }
          if (!in_grid) continue;
          if (!admissible(cc)) continue;
          CellRange r;
          auto val = candidate_value(cc, r);
          if (!val) continue;
          if (res.flagged[cell] || *val > res.value[cell]) {
            res.value[cell] = *val;
            res.witness[cell] = WitnessCube{cc.w, cc.a};
            res.flagged[cell] = 0;
          }
        }
      }
    });
    return res;
  }

  // uncentered family modes: enumerate cubes, scatter to contained cells
  std::vector<std::uint8_t> eval_mask;
  if (req.eval_cells) {
    eval_mask.assign(nc, 0);
    for (auto c : *req.eval_cells) eval_mask[c] = 1;
  }
  for (std::int64_t w : req.lattice.widths) {
    std::array<std::int64_t, kMaxDim> amax{};
    bool fits = true;
    for (int i = 0; i < n; ++i) {
      amax[i] = dims[i] - w;
      if (amax[i] < 0) fits = false;
    }
    if (!fits) continue;
    CellCube cc;
    cc.w = w;
    for (cc.a[0] = 0; cc.a[0] <= amax[0]; cc.a[0] += req.lattice.offset_step)
      for (cc.a[1] = 0; cc.a[1] <= (n > 1 ? amax[1] : 0); cc.a[1] += req.lattice.offset_step)
        for (cc.a[2] = 0; cc.a[2] <= (n > 2 ? amax[2] : 0); cc.a[2] += req.lattice.offset_step) {
          ++res.candidates_tested;
          if (!admissible(cc)) continue;
          CellRange r;
          auto val = candidate_value(cc, r);
          if (!val) continue;
          ++res.candidates_admissible;
          // scatter to all cells of the cube
          std::array<std::int64_t, kMaxDim> ci{};
          for (ci[0] = cc.a[0]; ci[0] < cc.a[0] + w; ++ci[0])
            for (ci[1] = (n > 1 ? cc.a[1] : 0); ci[1] < (n > 1 ? cc.a[1] + w : 1); ++ci[1])
              for (ci[2] = (n > 2 ? cc.a[2] : 0); ci[2] < (n > 2 ? cc.a[2] + w : 1); ++ci[2]) {
                std::array<std::int64_t, kMaxDim> idx{ci[0], n > 1 ? ci[1] : 0,
                                                      n > 2 ? ci[2] : 0};
                std::int64_t cell = dom.cell_flat(idx);
                if (!eval_mask.empty() && !eval_mask[cell]) continue;
                if (res.flagged[cell] || *val > res.value[cell]) {
                  res.value[cell] = *val;
                  res.witness[cell] = WitnessCube{cc.w, cc.a};
                  res.flagged[cell] = 0;
                }
              }
        }
  }
  return res;
}

PointwiseCompare pointwise_compare(const ScalarField& f, const Rational& alpha,
                                   const CandidateLattice& lat) {
  if (!(Rational(0, 1) < alpha) || !(alpha < Rational(1, 4)))
    throw precondition_error("pointwise_compare: alpha must be in (0, 1/4)");
  // gamma = 2 alpha / (1 - alpha)
  Rational gamma(2 * alpha.num, alpha.den - alpha.num);
  const Domain& dom = f.domain();
  const int n = dom.dim();

  MaximalRequest lhs_req;
  lhs_req.f = &f;
  lhs_req.beta = alpha;
  lhs_req.mode = MaxMode::uncentered;
  lhs_req.lattice = lat;
  // centered lattice needs the doubled odd companions 2w-1 of every width
  CandidateLattice clat = lat;
  for (std::int64_t w : lat.widths)
    if (2 * w - 1 > 0) clat.widths.push_back(2 * w - 1);
  std::sort(clat.widths.begin(), clat.widths.end());
  clat.widths.erase(std::unique(clat.widths.begin(), clat.widths.end()), clat.widths.end());
  MaximalRequest rhs_req;
  rhs_req.f = &f;
  rhs_req.beta = gamma;
  rhs_req.mode = MaxMode::centered;
  rhs_req.lattice = clat;

  PointwiseCompare pc;
  pc.gamma = gamma;
  pc.lhs = evaluate(lhs_req);
  pc.rhs = evaluate(rhs_req);
  double two_n = std::ldexp(1.0, n);
  pc.max_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pc.lhs.value.size(); ++i) {
    if (pc.lhs.flagged[i]) continue;
    double rhs = pc.rhs.flagged[i] ? 0.0 : pc.rhs.value[i];
    pc.max_violation = std::max(pc.max_violation, pc.lhs.value[i] - two_n * rhs);
  }
  if (!std::isfinite(pc.max_violation)) pc.max_violation = 0;
  return pc;
}

double lp_norm(const std::vector<double>& g, const ScalarField& w, double r,
               const std::vector<std::uint8_t>* skip) {
  if (r < 1) throw usage_error("lp_norm: exponent must be >= 1");
  if (static_cast<std::int64_t>(g.size()) != w.cells()) throw usage_error("lp_norm: shape mismatch");
  double hn = 1;
  for (int i = 0; i < w.domain().dim(); ++i) hn *= w.domain().h().to_double();
  long double s = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (skip && (*skip)[i]) continue;
    s += static_cast<long double>(std::pow(g[i], r)) * w.sample(static_cast<std::int64_t>(i));
  }
  return static_cast<double>(std::pow(static_cast<double>(s) * hn, 1.0 / r));
}

}  // namespace lmax
