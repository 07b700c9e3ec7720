#pragma once

#include "lmax/field.hpp"
#include "lmax/whitney.hpp"

namespace lmax {

enum class CzCase { dyadic_parent, whitney_neighbor };  // (i) / (ii)

struct CzResult {
  CzCase tag{};
  Cube selected;          // P (case i) or R in W_t (case ii)
  double selected_avg = 0;
  double constant = 0;    // c1 = 5^n/24^n for (i); achieved avg/level for (ii)
  bool contains_check = true;  // Q subset 5P subset 8Q (i) / Q meets R (ii)
};

/// Calderon-Zygmund style selection for a cube with avg_Q f > level.
/// Case (i) when 10Q in F_beta: a dyadic cube P with Q subset 5P subset 8Q,
/// 5P in F_beta and avg_P f > (5^n/24^n) level. Case (ii): the best-average
/// covering cube R meeting Q; Q subset W_{t,R} holds structurally since
/// Q is in F_beta and meets R.
CzResult cz_select(const ScalarField& f, const Cube& q, double level, const Rational& beta,
                   const WhitneyCovering& w);

inline double cz_c1(int n) {
  double c = 1;
  for (int i = 0; i < n; ++i) c *= 5.0 / 24.0;
  return c;
}

}  // namespace lmax
