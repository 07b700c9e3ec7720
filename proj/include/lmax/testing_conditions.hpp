#pragma once

#include "lmax/maximal.hpp"
#include "lmax/weights.hpp"

namespace lmax {

/// Sawyer-type testing: per sampled family cube Q,
///   ratio(Q) = (int_Q M_beta(sigma chi_Q)^q u)^(1/q) / (int_Q sigma)^(1/p),
/// evaluated on the given candidate lattice; the report carries the maximum
/// and its witness cube. Cubes with zero sigma mass are skipped.
struct SawyerOptions {
  CandidateLattice lattice;
  MaxMode mode = MaxMode::uncentered;  // centered for the centered variant
};
WeightClassReport sawyer_testing_constant(const ScalarField& u, const ScalarField& sigma,
                                          const ExponentPair& exps, const Rational& beta,
                                          const std::vector<CellCube>& sample,
                                          const SawyerOptions& opts);

double sawyer_ratio(const ScalarField& u, const ScalarField& sigma, const ExponentPair& exps,
                    const Rational& beta, const CellCube& q, const SawyerOptions& opts);

/// Finite-union testing (p = q regime):
///   ratio(F) = int_F M_beta(sigma chi_F)^p u / int_F sigma
/// over sampled unions F of family cubes, plus a bank-free estimate of the
/// operator norm of M_{beta,sigma} on L^p(sigma) over the union indicators.
struct FiniteUnionReport {
  WeightClassReport testing;           // max ratio over unions
  double weighted_norm_estimate = 0;   // M_{beta,sigma}: L^p(sigma) -> L^p(sigma) lower bound
  std::int64_t unions = 0;
};
FiniteUnionReport finite_union_testing_constant(const ScalarField& u, const ScalarField& sigma,
                                                double p, const Rational& beta,
                                                const std::vector<std::vector<CellCube>>& unions,
                                                const SawyerOptions& opts);

}  // namespace lmax
