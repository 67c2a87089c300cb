#pragma once

#include <map>
#include <utility>
#include <variant>
#include <vector>

#include "mmot/marginal.hpp"
#include "mmot/multi_index.hpp"
#include "mmot/pair_measure.hpp"

namespace mmot {

/// Symmetric probability measure on X^N, stored sparsely on the
/// nondecreasing multi-indices that carry mass. The weight attached to a
/// key is the total mass of its permutation orbit, so weights sum to 1.
class SymmetricPlan {
 public:
  using EntryMap = std::map<MultiIndex, double>;

  /// Validating constructor: keys nondecreasing and in range, weights
  /// positive (entries below kWeightFloor are dropped), total mass within
  /// kMassTolerance of 1.
  SymmetricPlan(int num_marginals, int num_sites, EntryMap entries);

  /// Explicit-renormalization constructor; `slack` bounds the allowed
  /// deviation of the input mass from 1 before scaling.
  static SymmetricPlan renormalized(int num_marginals, int num_sites,
                                    EntryMap entries, double slack = 1e-9);

  /// Point mass on the orbit of one multi-index.
  static SymmetricPlan dirac(int num_marginals, int num_sites, MultiIndex index);

  int num_marginals() const { return num_marginals_; }
  int num_sites() const { return num_sites_; }
  const EntryMap& entries() const { return entries_; }
  std::size_t support_size() const { return entries_.size(); }

  /// Orbit mass of a (not necessarily sorted) index tuple; 0 off support.
  double weight(std::span<const int> index) const;

  /// One-point marginal: lambda_i = sum_entries w * rho_i / N.
  Marginal marginal_one() const;

  /// Two-point marginal as a pair measure,
  /// mu_ij = sum_entries w * rho_i (rho_j - delta_ij) / (N (N-1)).
  PairMeasure marginal_pair() const;

  /// k-point marginal as a symmetric plan on X^k (k = N returns a copy).
  SymmetricPlan marginal_k(int k) const;

  /// Largest absolute weight difference over the union of supports.
  static double max_abs_difference(const SymmetricPlan& a, const SymmetricPlan& b);

  bool operator==(const SymmetricPlan&) const = default;

 private:
  int num_marginals_;
  int num_sites_;
  EntryMap entries_;
};

/// Result type of the marginal operation: Marginal for k=1, PairMeasure
/// for k=2, SymmetricPlan on X^k otherwise.
using MarginalResult = std::variant<Marginal, PairMeasure, SymmetricPlan>;

/// Dispatching k-point marginal, 1 <= k <= N.
MarginalResult marginal(const SymmetricPlan& plan, int k);

/// Linear symmetrization: mass of each (arbitrary-order) tuple goes to its
/// sorted orbit key. Input weights must be nonnegative and sum to 1 within
/// `slack`; the output is renormalized.
SymmetricPlan symmetrize(
    int num_marginals, int num_sites,
    const std::vector<std::pair<std::vector<int>, double>>& weights,
    double slack = 1e-9);

}  // namespace mmot
