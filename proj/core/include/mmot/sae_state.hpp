#pragma once

#include <optional>
#include <vector>

#include "mmot/marginal.hpp"
#include "mmot/quantized.hpp"
#include "mmot/symmetric_plan.hpp"

namespace mmot {

/// Sum tolerance for SAE site weights.
inline constexpr double kSaeWeightTolerance = 1e-10;

/// Sparse average of extremal states: site weights alpha^(nu) >= 0 summing
/// to 1 and quantized value distributions lambda^(nu), optionally realized
/// by maps T_1..T_N. Solver outputs satisfy the sparsity bound
/// support <= ell; representability witnesses may legitimately carry up to
/// one term per pair-measure coordinate, so the bound is asserted by the
/// producers rather than here.
class SAEState {
 public:
  struct Site {
    double weight;
    QuantizedMeasure distribution;
  };

  /// Validating constructor; entries with weight below `drop` are removed,
  /// remaining weights must sum to 1 within kSaeWeightTolerance.
  SAEState(int num_marginals, int num_sites, std::vector<Site> support,
           double drop = 0.0);

  /// Renormalizes weights after dropping dust, for LP-derived supports.
  static SAEState from_lp_weights(int num_marginals, int num_sites,
                                  std::vector<Site> support,
                                  double drop = 1e-10);

  int num_marginals() const { return num_marginals_; }
  int num_sites() const { return num_sites_; }
  const std::vector<Site>& support() const { return support_; }
  std::size_t support_size() const { return support_.size(); }

  bool has_maps() const { return maps_.has_value(); }
  /// N maps, each an ell-vector of 0-based site images.
  const std::vector<std::vector<int>>& maps() const;

  /// Average of the value distributions: sum_nu alpha^(nu) lambda^(nu).
  Marginal average_marginal() const;

  /// Expanded symmetric plan sum_nu alpha^(nu) psi_N(lambda^(nu)).
  SymmetricPlan expand() const;

  /// Attaches the canonical realizing maps: T_k(a_nu) walks the sorted
  /// multiset of lambda^(nu) (k-major); sites beyond the support map to
  /// themselves. Any other filling with the same value distributions
  /// expands to the same plan.
  void realize_maps();

  /// Attaches caller-provided maps after checking they reproduce every
  /// support distribution exactly.
  void attach_maps(std::vector<std::vector<int>> maps);

 private:
  int num_marginals_;
  int num_sites_;
  std::vector<Site> support_;
  std::optional<std::vector<std::vector<int>>> maps_;
};

}  // namespace mmot
