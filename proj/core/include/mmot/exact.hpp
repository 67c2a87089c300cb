#pragma once

#include <cstdint>
#include <vector>

#include "mmot/costs.hpp"
#include "mmot/marginal.hpp"
#include "mmot/quantized.hpp"
#include "mmot/rational.hpp"

namespace mmot {

/// Exact-arithmetic view of an extremal-mixture solve, used to adjudicate
/// disputed floating results. The pairwise cost entries are interpreted as
/// their exact dyadic values; infinite entries exclude columns exactly as
/// in the floating path.
struct ExactSolveReport {
  bool infinite = false;
  Rational cost;
  struct Site {
    Rational weight;
    QuantizedMeasure distribution;
  };
  std::vector<Site> support;
  /// Goldman-Tucker support margin (capped at 1); positive iff the
  /// optimal mixture is unique.
  Rational uniqueness_margin;
  bool unique = false;
};

/// Exact rational marginal helpers.
std::vector<Rational> rational_uniform(int num_sites);
std::vector<Rational> rational_from_marginal(const Marginal& marginal);

/// Solves the extremal-mixture LP in exact rational arithmetic and
/// certifies uniqueness of the optimal mixture. Subject to the exact-mode
/// column limit.
ExactSolveReport solve_sae_exact(const PairwiseCost& cost,
                                 const std::vector<Rational>& marginal,
                                 int num_marginals,
                                 std::uint64_t enumeration_limit =
                                     kDefaultEnumerationLimit);

}  // namespace mmot
