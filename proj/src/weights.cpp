#include "lmax/weights.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "lmax/errors.hpp"

namespace lmax {

std::vector<CellCube> sample_family_cubes(const Domain& dom, const Rational& beta,
                                          const CubeSampleSpec& spec) {
  std::vector<CellCube> out;
  FamilyParams fp(beta);
  const int n = dom.dim();
  for (std::int64_t w : spec.widths) {
    if (w < 1 || w > *std::min_element(dom.dims().begin(), dom.dims().begin() + n)) continue;
    std::array<std::int64_t, kMaxDim> a{};
    std::function<void(int)> rec = [&](int axis) {
      if (spec.max_count && out.size() >= spec.max_count) return;
      if (axis == n) {
        CellCube cc{a, w};
        Cube q = cc.to_cube(dom);
        if (!in_family(q, fp, dom)) return;
        if (spec.dilation_in_family > 1 &&
            !in_family(q.dilated(spec.dilation_in_family), fp, dom))
          return;
        if (spec.dilation_in_bbox) {
          Cube big = q.dilated(std::max<long long>(2, spec.dilation_in_family));
          for (int i = 0; i < n; ++i)
            if (big.lo(i) < dom.bbox_lo().x[i] || big.hi(i) > dom.bbox_hi().x[i]) return;
        }
        out.push_back(cc);
        return;
      }
      for (std::int64_t off = 0; off + w <= dom.dims()[axis]; off += spec.offset_step) {
        a[axis] = off;
        rec(axis + 1);
      }
    };
    rec(0);
  }
  return out;
}

WeightClassReport doubling_constant(const ScalarField& w, const Rational& beta,
                                    const std::vector<CellCube>& sample) {
  WeightClassReport rep;
  rep.cls = "D_beta";
  rep.family = "aligned family cubes with 2Q in family, " + std::to_string(sample.size());
  rep.sample_size = static_cast<std::int64_t>(sample.size());
  const Domain& dom = w.domain();
  for (const auto& cc : sample) {
    Cube q = cc.to_cube(dom);
    CellRange rq = w.snap(q), r2 = w.snap(q.dilated(2));
    double wq = w.integrate(rq);
    double w2 = w.integrate(r2);
    if (wq <= 0) {
      rep.unbounded = true;
      rep.witness.assign(1, cc);
      rep.constant = std::numeric_limits<double>::infinity();
      return rep;
    }
    double ratio = w2 / wq;
    if (ratio > rep.constant) {
      rep.constant = ratio;
      rep.witness.assign(1, cc);
    }
  }
  return rep;
}

double apq_product(const ScalarField& u, const ScalarField& sigma, const ExponentPair& exps,
                   const CellCube& q) {
  const Domain& dom = u.domain();
  Cube cube = q.to_cube(dom);
  CellRange r = u.snap(cube);
  std::int64_t cnt = r.count();
  if (cnt == 0) return 0;
  double hn = 1;
  for (int i = 0; i < dom.dim(); ++i) hn *= dom.h().to_double();
  double volume = static_cast<double>(cnt) * hn;
  double ua = u.integrate(r) / volume;
  double sa = sigma.integrate(r) / volume;
  return std::pow(ua, exps.p / exps.q) * std::pow(sa, exps.p - 1.0);
}

WeightClassReport apq_constant(const ScalarField& u, const ScalarField& sigma,
                               const ExponentPair& exps, const std::vector<CellCube>& sample,
                               bool local, const Rational& beta) {
  if (sample.empty()) throw usage_error("apq_constant: empty sample");
  WeightClassReport rep;
  rep.cls = local ? "Apq_beta" : "Apq";
  rep.family = (local ? "family cubes (beta=" + beta.str() + "), " : "snapped cubes, ") +
               std::to_string(sample.size());
  rep.sample_size = static_cast<std::int64_t>(sample.size());
  for (const auto& cc : sample) {
    double v = apq_product(u, sigma, exps, cc);
    if (v > rep.constant) {
      rep.constant = v;
      rep.witness.assign(1, cc);
    }
  }
  return rep;
}

AinftyEstimate ainfty_estimate(const ScalarField& w, const Rational& beta,
                               const std::vector<CellCube>& qs, Rng& rng, int pairs_per_cube) {
  const Domain& dom = w.domain();
  const int n = dom.dim();
  AinftyEstimate est;
  est.delta = std::numeric_limits<double>::infinity();
  double worst = -1;
  // ratio samples: (x, y) = (log|E|/|Q|, log w(E)/w(Q)); the envelope with
  // intercept c=1 is delta = min y/x over x < 0 (all y <= 0 since E in Q)
  auto consider = [&](const CellCube& q, double mass_e, std::int64_t cells_e, double mass_q,
                      std::int64_t cells_q, const char* kind) {
    if (cells_e <= 0 || cells_e >= cells_q) return;
    if (mass_q <= 0) {
      est.unbounded = true;
      est.witness_q = q;
      est.witness_kind = kind;
      return;
    }
    ++est.pairs;
    double x = std::log(static_cast<double>(cells_e) / static_cast<double>(cells_q));
    if (mass_e <= 0) return;  // w(E)=0 satisfies any envelope
    double y = std::log(mass_e / mass_q);
    double slope = y / x;  // both <= 0
    if (slope < est.delta) {
      est.delta = slope;
      est.witness_q = q;
      est.witness_kind = kind;
      worst = slope;
    }
  };

  for (const auto& cc : qs) {
    CellRange rq;
    rq.n = n;
    for (int i = 0; i < n; ++i) {
      rq.lo[i] = cc.a[i];
      rq.hi[i] = cc.a[i] + cc.w;
    }
    std::int64_t cells_q = rq.count();
    double mass_q = w.integrate(rq);
    // dyadic children (even widths split exactly)
    if (cc.w % 2 == 0) {
      for (int m = 0; m < (1 << n); ++m) {
        CellRange re = rq;
        for (int i = 0; i < n; ++i) {
          std::int64_t half = cc.w / 2;
          re.lo[i] = cc.a[i] + (((m >> i) & 1) ? half : 0);
          re.hi[i] = re.lo[i] + half;
        }
        consider(cc, w.integrate(re), re.count(), mass_q, cells_q, "dyadic_child");
      }
    }
    // random sub-cubes
    for (int k = 0; k < pairs_per_cube; ++k) {
      std::int64_t we = 1 + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(cc.w)));
      CellRange re;
      re.n = n;
      for (int i = 0; i < n; ++i) {
        re.lo[i] = cc.a[i] + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(cc.w - we + 1)));
        re.hi[i] = re.lo[i] + we;
      }
      consider(cc, w.integrate(re), re.count(), mass_q, cells_q, "sub_cube");
    }
    // random cell unions (measurable E beyond cubes)
    for (int k = 0; k < pairs_per_cube / 2; ++k) {
      std::int64_t cells_e = 0;
      double mass_e = 0;
      std::int64_t target = 1 + static_cast<std::int64_t>(rng.below(
                                 static_cast<std::uint64_t>(std::max<std::int64_t>(1, cells_q / 2))));
      for (std::int64_t t = 0; t < target; ++t) {
        std::array<std::int64_t, kMaxDim> ci{};
        for (int i = 0; i < n; ++i)
          ci[i] = cc.a[i] + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(cc.w)));
        // duplicates are rare and only shrink E; acceptable for sampling
        CellRange one;
        one.n = n;
        for (int i = 0; i < n; ++i) {
          one.lo[i] = ci[i];
          one.hi[i] = ci[i] + 1;
        }
        mass_e += w.integrate(one);
        ++cells_e;
      }
      consider(cc, mass_e, cells_e, mass_q, cells_q, "cell_union");
    }
  }
  if (!std::isfinite(est.delta)) est.delta = 1.0;  // no informative pair
  est.delta = std::min(est.delta, 1.0);
  est.c = 1.0;  // the min-slope envelope passes through the worst pair
  (void)worst;
  return est;
}

RhiEstimate reverse_holder_exponent(const ScalarField& w, const Rational& beta,
                                    const std::vector<CellCube>& sample, double cap) {
  if (w.min_sample() <= 0)
    throw precondition_error("reverse_holder: weight must be strictly positive (floor first)");
  RhiEstimate est;
  const Domain& dom = w.domain();
  for (int g = 1; g <= 10; ++g) {
    double eps = std::ldexp(1.0, -g);
    ScalarField wp = w.pow_samples(1.0 + eps);
    double attained = 0;
    for (const auto& cc : sample) {
      CellRange r;
      r.n = dom.dim();
      for (int i = 0; i < dom.dim(); ++i) {
        r.lo[i] = cc.a[i];
        r.hi[i] = cc.a[i] + cc.w;
      }
      double hn = 1;
      for (int i = 0; i < dom.dim(); ++i) hn *= dom.h().to_double();
      double volume = static_cast<double>(r.count()) * hn;
      double lhs = std::pow(wp.integrate(r) / volume, 1.0 / (1.0 + eps));
      double rhs = w.integrate(r) / volume;
      if (rhs > 0) attained = std::max(attained, lhs / rhs);
    }
    est.attained.push_back(attained);
    if (attained <= cap && !est.found) {
      // grid is descending in eps: g=1 is the largest eps; take the first hit
      est.found = true;
      est.eps = eps;
      est.constant = attained;
    }
  }
  std::reverse(est.attained.begin(), est.attained.end());  // ascending eps
  return est;
}

}  // namespace lmax
