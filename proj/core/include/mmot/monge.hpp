#pragma once

#include <optional>
#include <vector>

#include "mmot/sae_state.hpp"
#include "mmot/symmetric_plan.hpp"

namespace mmot {

/// N permutations of {0,...,ell-1}, each stored as its image vector.
struct MongeState {
  std::vector<std::vector<int>> permutations;

  MongeState(int num_sites, std::vector<std::vector<int>> perms);
  int num_sites() const { return num_sites_; }
  int num_marginals() const { return static_cast<int>(permutations.size()); }

  /// The symmetrized plan sum_nu (1/ell) S delta_{tau_1(nu)...tau_N(nu)}.
  SymmetricPlan expand() const;

 private:
  int num_sites_;
};

/// ell x ell matrix with entries in {0, 1/N, ..., 1} and unit row/column
/// sums, stored internally as integer counts out of N so the Birkhoff
/// decomposition is exact.
class QuantizedDoublyStochastic {
 public:
  /// From integer counts: every row and column must sum to N.
  QuantizedDoublyStochastic(int num_marginals, std::vector<std::vector<int>> counts);

  /// From a real matrix: entries must be within 1e-12 of multiples of 1/N
  /// and rows/columns must sum to 1 within 1e-12.
  static QuantizedDoublyStochastic from_real(
      int num_marginals, const std::vector<std::vector<double>>& matrix);

  int num_marginals() const { return num_marginals_; }
  int size() const { return static_cast<int>(counts_.size()); }
  const std::vector<std::vector<int>>& counts() const { return counts_; }

 private:
  int num_marginals_;
  std::vector<std::vector<int>> counts_;
};

struct MatchingResult {
  enum class Verdict { matched, deficient };

  Verdict verdict;
  /// Perfect matching as images: left vertex i pairs with column match[i].
  std::vector<int> match;
  /// Hall-violating left set when deficient: |neighborhood(W)| < |W|.
  std::vector<int> deficient_set;

  bool matched() const { return verdict == Verdict::matched; }
};

/// Augmenting-path bipartite matching on a square 0/1 adjacency matrix.
/// Deterministic: vertices and neighbors are scanned in increasing order,
/// so ties resolve to the lexicographically smallest matching reachable by
/// greedy augmentation. Returns a perfect matching or a Hall witness.
MatchingResult perfect_matching(const std::vector<std::vector<bool>>& adjacency);

/// Writes A as (1/N) sum of exactly N permutation matrices, exact in
/// integer arithmetic. Each round matches on the positive support and
/// subtracts 1/N of the matched permutation; the remainder stays doubly
/// stochastic at every step (asserted). A matching deficiency means the
/// input was not truly quantized doubly stochastic and raises
/// ValidationError.
std::vector<std::vector<int>> birkhoff_quantized_decompose(
    const QuantizedDoublyStochastic& matrix);

/// SAE state of a Monge state: site weights 1/ell and the empirical value
/// distributions of the map ensemble; always satisfies the uniform
/// marginal constraint. The maps are attached.
SAEState monge_to_sae(const MongeState& monge);

/// Inverse direction: requires uniform site weights 1/ell (within 1e-10)
/// and uniform average marginal; assembles the column matrix of value
/// distributions, Birkhoff-decomposes it, and returns maps whose
/// symmetrized Monge state expands to the same plan as the input. Inputs
/// outside this class are rejected with a diagnostic.
MongeState sae_to_monge(const SAEState& state);

}  // namespace mmot
