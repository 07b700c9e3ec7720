#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lmax/field.hpp"
#include "lmax/whitney.hpp"

namespace lmax {

enum class MaxMode { uncentered, centered, truncated, weighted, fractional };

/// Candidate cubes are cell ranges (common width w, any offsets), so all
/// corners sit on the grid lattice, snapping is the identity and the
/// discrete pointwise inequalities (doubling pairs, mode decomposition)
/// hold exactly. Even widths are node-centered, odd widths cell-centered;
/// the centered operator at a cell center uses the odd widths.
struct CandidateLattice {
  std::vector<std::int64_t> widths;  // ascending
  std::int64_t offset_step = 1;

  /// Dyadic-plus default: powers of two and their doubled odd companions,
  /// extended with the covering scales present at (beta, t).
  static CandidateLattice dyadic_default(const Domain& dom, const Rational& beta);
  /// Dense oracle mode: every width from 1 to the family cap.
  static CandidateLattice dense(const Domain& dom, const Rational& beta);
};

struct MaximalRequest {
  const ScalarField* f = nullptr;
  Rational beta;
  MaxMode mode = MaxMode::uncentered;
  const ScalarField* sigma = nullptr;  // weighted mode
  double alpha_frac = 0;               // fractional mode, 0 <= alpha_frac < n
  CandidateLattice lattice;
  std::optional<std::vector<std::int64_t>> eval_cells;  // default: all cells
};

struct WitnessCube {
  std::int64_t w = 0;
  std::array<std::int64_t, kMaxDim> a{};
};

struct MaximalResult {
  std::vector<double> value;          // per evaluation cell (flat cell index)
  std::vector<WitnessCube> witness;
  std::vector<std::uint8_t> flagged;  // 1 = no admissible candidate
  std::int64_t candidates_tested = 0;
  std::int64_t candidates_admissible = 0;

  std::int64_t flagged_count() const {
    std::int64_t c = 0;
    for (auto b : flagged) c += b;
    return c;
  }
};

MaximalResult evaluate(const MaximalRequest& req);

/// Lemma comparison M_alpha f <= 2^n M_gamma^c f with gamma = 2a/(1-a),
/// 0 < a < 1/4. Returns both fields and the max violation over cells.
struct PointwiseCompare {
  MaximalResult lhs;   // uncentered at alpha
  MaximalResult rhs;   // centered at gamma
  Rational gamma;
  double max_violation = 0;  // max of lhs - 2^n rhs over unflagged cells
};
PointwiseCompare pointwise_compare(const ScalarField& f, const Rational& alpha,
                                   const CandidateLattice& lat);

/// (sum_cells g^r w h^n)^(1/r); cells where skip[i] != 0 are excluded.
double lp_norm(const std::vector<double>& g, const ScalarField& w, double r,
               const std::vector<std::uint8_t>* skip = nullptr);

}  // namespace lmax
