#pragma once

#include <map>
#include <optional>

#include "lmax/bank.hpp"
#include "lmax/report.hpp"
#include "lmax/testing_conditions.hpp"

namespace lmax {

/// One experiment configuration. Hypotheses (doubling, A_infty) are always
/// measured against the caps here, never assumed; experiments degrade to
/// hypothesis-not-met entries instead of asserting off-hypothesis.
struct ExperimentConfig {
  std::shared_ptr<const Domain> domain;
  std::optional<ScalarField> u, v;  // default: constant 1
  ExponentPair exps{2, 2};
  Rational beta{1, 2};
  std::optional<CandidateLattice> lattice;  // default: dyadic_default
  BankSpec bank;
  std::uint64_t seed = 1;
  double eps_floor = 1e-12;
  double doubling_cap = 64;
  double ainfty_delta_min = 0.02;
  double constant_cap = 1e8;
  double float_slack = 1e-12;            // roundoff slack on exact inequalities
  std::vector<std::int64_t> sample_widths = {2, 4, 8};
  std::int64_t sample_offset_step = 3;
  std::size_t sample_cap = 48;
};

struct NormEstimate {
  double ratio = 0;
  std::string witness;
  std::size_t bank_size = 0;
  std::int64_t flagged_cells = 0;
};

/// Smallest t with 2^-t <= beta/20 (the covering scale the experiments use).
int whitney_minimal_t(const Rational& beta);

/// Shared precomputation for the experiments.
struct Workbench {
  ExperimentConfig cfg;
  ScalarField u, v, sigma;
  std::int64_t sigma_floored = 0;
  CandidateLattice lattice;
  std::vector<CellCube> sample;          // family cubes, doubling-compatible
  WhitneyCovering whitney;
  std::vector<BankMember> bank;
  mutable std::map<int, NormEstimate> norm_cache;

  static Workbench prepare(ExperimentConfig cfg);
};

NormEstimate estimate_operator_norm(const Workbench& wb, MaxMode mode,
                                    const Rational* beta_override = nullptr);

Report verify_theorem2(const Workbench& wb);
Report verify_theorem3_and_4(const Workbench& wb);
Report verify_prop45(const Workbench& wb);
Report verify_beta_independence(const Workbench& wb, const Rational& alpha);
Report verify_self_improvement(const Workbench& wb);

/// Lemma comparison experiment over seeded random fields.
Report verify_pointwise_comparison(std::shared_ptr<const Domain> dom, const Rational& alpha,
                                   int field_count, std::uint64_t seed, double tolerance,
                                   bool dense);

/// Power-weight dichotomy: global A_{p,q} vs local A_{p,q}^beta constants
/// across grid refinements, cross-checked against exact annular integrals.
struct DichotomyResult {
  Report report;
  std::vector<double> global_in, global_out, local_out;  // per level
  double oracle_growth_out = 0;
};
DichotomyResult power_dichotomy(int levels, const Rational& beta, std::uint64_t seed);

/// Exact integral of |x|_inf^alpha over the centered annulus a <= r <= b
/// (closed form, the scaling oracle).
double annulus_power_integral(int n, double alpha, double a, double b);

}  // namespace lmax
