#include "lmax/testing_conditions.hpp"

#include <cmath>

#include "lmax/errors.hpp"

namespace lmax {

namespace {

// cells of a union of cell cubes (dedup via mask)
std::vector<std::uint8_t> union_mask(const Domain& dom, const std::vector<CellCube>& cubes) {
  std::vector<std::uint8_t> mask(dom.cell_count(), 0);
  const int n = dom.dim();
  for (const auto& cc : cubes) {
    std::array<std::int64_t, kMaxDim> ci{};
    for (ci[0] = cc.a[0]; ci[0] < cc.a[0] + cc.w; ++ci[0])
      for (ci[1] = (n > 1 ? cc.a[1] : 0); ci[1] < (n > 1 ? cc.a[1] + cc.w : 1); ++ci[1])
        for (ci[2] = (n > 2 ? cc.a[2] : 0); ci[2] < (n > 2 ? cc.a[2] + cc.w : 1); ++ci[2]) {
          std::array<std::int64_t, kMaxDim> idx{ci[0], n > 1 ? ci[1] : 0, n > 2 ? ci[2] : 0};
          mask[dom.cell_flat(idx)] = 1;
        }
  }
  return mask;
}

std::vector<std::int64_t> mask_cells(const std::vector<std::uint8_t>& mask) {
  std::vector<std::int64_t> cells;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) cells.push_back(static_cast<std::int64_t>(i));
  return cells;
}

}  // namespace

double sawyer_ratio(const ScalarField& u, const ScalarField& sigma, const ExponentPair& exps,
                    const Rational& beta, const CellCube& q, const SawyerOptions& opts) {
  const Domain& dom = u.domain();
  CellRange rq;
  rq.n = dom.dim();
  for (int i = 0; i < dom.dim(); ++i) {
    rq.lo[i] = q.a[i];
    rq.hi[i] = q.a[i] + q.w;
  }
  double sigma_mass = sigma.integrate(rq);
  if (sigma_mass <= 0) return -1;  // caller skips with warning

  ScalarField sig_q = sigma.restricted(rq);
  MaximalRequest req;
  req.f = &sig_q;
  req.beta = beta;
  req.mode = opts.mode;
  req.lattice = opts.lattice;
  req.eval_cells = mask_cells(union_mask(dom, {q}));
  MaximalResult m = evaluate(req);

  double hn = 1;
  for (int i = 0; i < dom.dim(); ++i) hn *= dom.h().to_double();
  long double acc = 0;
  for (auto cell : *req.eval_cells)
    acc += std::pow(m.value[cell], exps.q) * u.sample(cell);
  double numerator = std::pow(static_cast<double>(acc) * hn, 1.0 / exps.q);
  return numerator / std::pow(sigma_mass, 1.0 / exps.p);
}

WeightClassReport sawyer_testing_constant(const ScalarField& u, const ScalarField& sigma,
                                          const ExponentPair& exps, const Rational& beta,
                                          const std::vector<CellCube>& sample,
                                          const SawyerOptions& opts) {
  WeightClassReport rep;
  rep.cls = "Sawyer";
  rep.family = "family cubes (beta=" + beta.str() + "), " + std::to_string(sample.size());
  rep.sample_size = static_cast<std::int64_t>(sample.size());
  for (const auto& q : sample) {
    double r = sawyer_ratio(u, sigma, exps, beta, q, opts);
    if (r < 0) continue;  // zero sigma mass: skipped
    if (r > rep.constant) {
      rep.constant = r;
      rep.witness.assign(1, q);
    }
  }
  return rep;
}

FiniteUnionReport finite_union_testing_constant(const ScalarField& u, const ScalarField& sigma,
                                                double p, const Rational& beta,
                                                const std::vector<std::vector<CellCube>>& unions,
                                                const SawyerOptions& opts) {
  const Domain& dom = u.domain();
  FiniteUnionReport rep;
  rep.testing.cls = "finite_union";
  rep.testing.family = "unions of family cubes, " + std::to_string(unions.size());
  rep.testing.sample_size = static_cast<std::int64_t>(unions.size());
  rep.unions = static_cast<std::int64_t>(unions.size());
  ExponentPair pp(p, p);

  double hn = 1;
  for (int i = 0; i < dom.dim(); ++i) hn *= dom.h().to_double();

  for (const auto& cubes : unions) {
    auto mask = union_mask(dom, cubes);
    auto cells = mask_cells(mask);
    ScalarField sig_f = sigma.restricted_mask(mask);
    long double sigma_mass_acc = 0;
    for (auto cell : cells) sigma_mass_acc += sigma.sample(cell);
    double sigma_mass = static_cast<double>(sigma_mass_acc) * hn;
    if (sigma_mass <= 0) continue;  // union skipped

    MaximalRequest req;
    req.f = &sig_f;
    req.beta = beta;
    req.mode = opts.mode;
    req.lattice = opts.lattice;
    req.eval_cells = cells;
    MaximalResult m = evaluate(req);
    long double acc = 0;
    for (auto cell : cells) acc += std::pow(m.value[cell], p) * u.sample(cell);
    double ratio = static_cast<double>(acc) * hn / sigma_mass;
    if (ratio > rep.testing.constant) {
      rep.testing.constant = ratio;
      rep.testing.witness = cubes;
    }

    // companion hypothesis: M_{beta,sigma} on L^p(sigma), tested on chi_F
    MaximalRequest wreq;
    ScalarField chi = ScalarField::constant(u.domain_ptr(), 1.0).restricted_mask(mask);
    wreq.f = &chi;
    wreq.beta = beta;
    wreq.mode = MaxMode::weighted;
    wreq.sigma = &sigma;
    wreq.lattice = opts.lattice;
    MaximalResult wm = evaluate(wreq);
    double num = lp_norm(wm.value, sigma, p, &wm.flagged);
    std::vector<double> chivals(chi.samples());
    double den = lp_norm(chivals, sigma, p, nullptr);
    if (den > 0) rep.weighted_norm_estimate = std::max(rep.weighted_norm_estimate, num / den);
  }
  return rep;
}

}  // namespace lmax
