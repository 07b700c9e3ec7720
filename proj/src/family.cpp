#include "lmax/family.hpp"

#include "lmax/errors.hpp"

namespace lmax {

void enumerate_family_cubes(const Domain& dom, const FamilyParams& fp, const EnumerateSpec& spec,
                            const std::function<void(const CellCube&)>& fn) {
  if (spec.offset_step < 1) throw usage_error("enumerate: offset_step must be >= 1");
  const int n = dom.dim();
  const auto& dims = dom.dims();
  for (std::int64_t w : spec.widths) {
    if (w < 1) continue;
    std::array<std::int64_t, kMaxDim> a{};
    std::function<void(int)> rec = [&](int axis) {
      if (axis == n) {
        CellCube cc{a, w};
        Cube q = cc.to_cube(dom);
        if (!in_family(q, fp, dom)) return;
        if (spec.require_dilation_inside) {
          Cube big = q.dilated(10);
          for (int i = 0; i < n; ++i)
            if (big.lo(i) < dom.bbox_lo().x[i] || big.hi(i) > dom.bbox_hi().x[i]) return;
        }
        fn(cc);
        return;
      }
      for (std::int64_t off = 0; off + w <= dims[axis]; off += spec.offset_step) {
        a[axis] = off;
        rec(axis + 1);
      }
    };
    rec(0);
  }
}

std::vector<CellCube> collect_family_cubes(const Domain& dom, const FamilyParams& fp,
                                           const EnumerateSpec& spec) {
  std::vector<CellCube> out;
  enumerate_family_cubes(dom, fp, spec, [&](const CellCube& c) { out.push_back(c); });
  return out;
}

}  // namespace lmax
