#include "lmax/bank.hpp"

#include <algorithm>
#include <cmath>

namespace lmax {

std::vector<BankMember> build_bank(const ScalarField& sigma, const WhitneyCovering* whitney,
                                   const Rational& beta, const std::vector<CellCube>& test_cubes,
                                   const BankSpec& spec) {
  std::vector<BankMember> bank;
  auto dom = sigma.domain_ptr();
  const Domain& d = *dom;
  const int n = d.dim();
  Rng rng(spec.seed);

  // sigma chi_Q members in sample order; count <= 0 keeps every testing
  // function (required for the necessity inequality), and growing any count
  // only extends the bank (prefix property for the monotonicity check)
  std::size_t take = spec.sigma_chi_count <= 0
                         ? test_cubes.size()
                         : std::min<std::size_t>(spec.sigma_chi_count, test_cubes.size());
  for (std::size_t i = 0; i < take; ++i) {
    const CellCube& cc = test_cubes[i];
    CellRange r;
    r.n = n;
    for (int k = 0; k < n; ++k) {
      r.lo[k] = cc.a[k];
      r.hi[k] = cc.a[k] + cc.w;
    }
    bank.push_back({"sigma_chi_Q[" + std::to_string(i) + "]", sigma.restricted(r)});
  }

  // covering-cube indicators, deterministic order, grid-resolved only
  if (whitney && spec.whitney_count > 0) {
    int added = 0;
    std::size_t stride = std::max<std::size_t>(1, whitney->cubes.size() /
                                                      static_cast<std::size_t>(spec.whitney_count));
    for (std::size_t i = 0; i < whitney->cubes.size() && added < spec.whitney_count; i += stride) {
      Cube q = whitney->cubes[i].cube.to_cube(n);
      CellRange r;
      try {
        r = sigma.snap(q);
      } catch (...) {
        continue;
      }
      if (r.empty()) continue;
      bank.push_back({"whitney_chi[" + std::to_string(i) + "]",
                      ScalarField::constant(dom, 1.0).restricted(r)});
      ++added;
    }
  }

  // seeded sparse bumps
  for (int b = 0; b < spec.bump_count; ++b) {
    std::vector<double> s(d.cell_count(), 0.0);
    int spikes = 1 + static_cast<int>(rng.below(4));
    for (int k = 0; k < spikes; ++k) {
      std::array<std::int64_t, kMaxDim> ci{};
      for (int i = 0; i < n; ++i)
        ci[i] = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(d.dims()[i])));
      std::int64_t rad = 1 + static_cast<std::int64_t>(rng.below(3));
      double amp = std::exp(rng.uniform(-1.0, 3.0));
      std::array<std::int64_t, kMaxDim> lo{}, hi{};
      for (int i = 0; i < n; ++i) {
        lo[i] = std::max<std::int64_t>(0, ci[i] - rad);
        hi[i] = std::min<std::int64_t>(d.dims()[i] - 1, ci[i] + rad);
      }
      std::array<std::int64_t, kMaxDim> it{};
      for (it[0] = lo[0]; it[0] <= hi[0]; ++it[0])
        for (it[1] = (n > 1 ? lo[1] : 0); it[1] <= (n > 1 ? hi[1] : 0); ++it[1])
          for (it[2] = (n > 2 ? lo[2] : 0); it[2] <= (n > 2 ? hi[2] : 0); ++it[2])
            s[d.cell_flat(it)] += amp;
    }
    bank.push_back({"bump[" + std::to_string(b) + "]", ScalarField::from_cells(dom, std::move(s))});
  }

  // power profiles around the bbox center
  Point center;
  center.n = n;
  for (int i = 0; i < n; ++i)
    center.x[i] = (d.bbox_lo().x[i] + d.bbox_hi().x[i]).div_pow2(1);
  for (double alpha : spec.power_profiles) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "power[%g]", alpha);
    bank.push_back({buf, ScalarField::power(dom, alpha, center)});
  }
  return bank;
}

}  // namespace lmax
