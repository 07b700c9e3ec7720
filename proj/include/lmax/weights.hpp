#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lmax/field.hpp"
#include "lmax/rng.hpp"

namespace lmax {

struct ExponentPair {
  double p = 2, q = 2;

  ExponentPair() = default;
  ExponentPair(double p_, double q_) : p(p_), q(q_) {
    if (!(1 < p) || !(p <= q) || !std::isfinite(q))
      throw std::invalid_argument("exponents: need 1 < p <= q < inf");
  }
  double p_conj() const { return p / (p - 1); }
};

/// Every class constant is a maximum over an explicit sampled family,
/// never a claimed supremum; the report names its family and stores the
/// witness attaining the maximum.
struct WeightClassReport {
  std::string cls;                     // D_beta | Ainfty_beta | RHI | Apq_beta | Apq | Sawyer | finite_union
  double constant = 0;
  bool unbounded = false;
  std::string family;                  // description of the sample family
  std::vector<CellCube> witness;       // cube(s) attaining the constant
  double aux_delta = 0, aux_eps = 0;   // class-specific extras
  double aux_c = 0;
  std::int64_t sample_size = 0;
};

/// Cell-aligned sample of family cubes: even widths (so the doubled cube is
/// aligned too) on a coarse offset lattice, optionally filtered so that a
/// given dilation stays in F_beta or in the bounding box.
struct CubeSampleSpec {
  std::vector<std::int64_t> widths;
  std::int64_t offset_step = 4;
  long long dilation_in_family = 0;  // e.g. 2 for doubling pairs
  bool dilation_in_bbox = false;
  std::size_t max_count = 0;  // 0 = unlimited
};
std::vector<CellCube> sample_family_cubes(const Domain& dom, const Rational& beta,
                                          const CubeSampleSpec& spec);

/// D_beta: max of w(2Q)/w(Q) over sampled Q with Q, 2Q in F_beta.
WeightClassReport doubling_constant(const ScalarField& w, const Rational& beta,
                                    const std::vector<CellCube>& sample);

/// A_{p,q} product (u(Q)/|Q|)^(p/q) (sigma(Q)/|Q|)^(p-1) over a sample;
/// pass local=false for the global class (sample unrestricted by F_beta).
WeightClassReport apq_constant(const ScalarField& u, const ScalarField& sigma,
                               const ExponentPair& exps, const std::vector<CellCube>& sample,
                               bool local, const Rational& beta);

double apq_product(const ScalarField& u, const ScalarField& sigma, const ExponentPair& exps,
                   const CellCube& q);

/// A_infty upper envelope over sampled pairs E subset Q: the largest delta
/// such that intercept c = 1 bounds every pair, with the worst pair as
/// witness; samples mix sub-cubes, dyadic children and random cell unions.
struct AinftyEstimate {
  double c = 1, delta = 1;
  bool unbounded = false;
  CellCube witness_q;
  std::string witness_kind;
  std::int64_t pairs = 0;
};
AinftyEstimate ainfty_estimate(const ScalarField& w, const Rational& beta,
                               const std::vector<CellCube>& qs, Rng& rng, int pairs_per_cube = 8);

/// Largest eps on the grid {2^-1..2^-10} whose attained reverse Holder
/// constant stays below the cap.
struct RhiEstimate {
  bool found = false;
  double eps = 0, constant = 0;
  std::vector<double> attained;  // per grid eps, ascending eps
};
RhiEstimate reverse_holder_exponent(const ScalarField& w, const Rational& beta,
                                    const std::vector<CellCube>& sample, double cap = 16.0);

}  // namespace lmax
