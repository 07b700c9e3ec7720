#pragma once

#include <string>
#include <vector>

#include "lmax/maximal.hpp"
#include "lmax/weights.hpp"

namespace lmax {

struct BankMember {
  std::string name;
  ScalarField field;
};

struct BankSpec {
  int sigma_chi_count = 24;    // sigma chi_Q over sampled family cubes
  int whitney_count = 16;      // indicators of covering cubes
  int bump_count = 12;         // seeded random sparse bumps
  std::vector<double> power_profiles = {0.5, -0.5};
  std::uint64_t seed = 1;
};

/// Test-function bank for operator norm estimation; always contains the
/// Sawyer testing functions of the sampled cubes so the necessity
/// inequality testing <= norm is exact at desk scale.
std::vector<BankMember> build_bank(const ScalarField& sigma, const WhitneyCovering* whitney,
                                   const Rational& beta, const std::vector<CellCube>& test_cubes,
                                   const BankSpec& spec);

}  // namespace lmax
