#pragma once

#include <functional>

#include "fdl/core/error.hpp"
#include "fdl/setlib/box_dimension.hpp"
#include "fdl/setlib/dyadic.hpp"

namespace fdl::setlib {

/// Family of sets indexed by level, queried pointwise.
using IndexedFamily = std::function<bool(int index, double x)>;

/// Number of indices in [lo, hi] whose set contains x: a finite proxy for
/// membership in the limsup of the family.
inline int limsup_membership(const IndexedFamily& family, double x, int lo, int hi) {
  require(lo <= hi, "limsup_membership: window must be non-empty");
  int hits = 0;
  for (int j = lo; j <= hi; ++j)
    if (family(j, x)) ++hits;
  return hits;
}

/// The family j -> I_j for a fixed alpha.
inline IndexedFamily dyadic_family_sets(double alpha) {
  return [alpha](int j, double x) { return DyadicFamily(DyadicFamilyParams(j, alpha)).contains(x); };
}

/// Finite-depth cover of limsup_j I_j: at box scale 2^-m it is I_{m+1},
/// the level whose intervals have length 2^-m.
inline std::function<MembershipOracle(int)> dyadic_limsup_cover(double alpha) {
  return [alpha](int m) -> MembershipOracle {
    DyadicFamily fam(DyadicFamilyParams(m + 1, alpha));
    return [fam](double x) { return fam.contains(x); };
  };
}

}  // namespace fdl::setlib
