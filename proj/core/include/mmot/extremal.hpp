#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <vector>

#include "mmot/marginal.hpp"
#include "mmot/pair_measure.hpp"
#include "mmot/quantized.hpp"
#include "mmot/sae_state.hpp"
#include "mmot/symmetric_plan.hpp"

namespace mmot {

/// Marginal-to-correlated-state map: mu_ij = N/(N-1) lambda_i lambda_j off
/// the diagonal, mu_ii = N/(N-1) lambda_i^2 - 1/(N-1) lambda_i. Defined on
/// all of P(X); diagonal entries can be negative for non-quantized
/// marginals, so the result is a signed pair measure with row sums lambda.
PairMeasure phi_n(const Marginal& lambda, int num_marginals);

/// The symmetrized Dirac whose sorted multi-index repeats site i exactly
/// rho_i times; its one-point marginal is rho/N exactly.
SymmetricPlan psi_n(const QuantizedMeasure& q);

/// Transport cost of a pair measure for the discrete metric: the total
/// off-diagonal mass (independent of the metric exponent).
double wasserstein_discrete(const PairMeasure& mu);

/// Sum of discrete-metric distances over all coordinate pairs,
/// binom(N,2) * wasserstein_discrete(two-point marginal).
double gangbo_swiech_cost(const SymmetricPlan& plan);

/// The extreme points of the N-representable pair-measure polytope:
/// the quantized measures in enumeration order together with their
/// (lazily materialized) images under phi_n.
class ExtremePointCatalog {
 public:
  ExtremePointCatalog(int num_sites, int num_marginals,
                      std::uint64_t limit = kDefaultEnumerationLimit);

  int num_sites() const { return num_sites_; }
  int num_marginals() const { return num_marginals_; }
  std::size_t size() const { return points_.size(); }
  const QuantizedMeasure& point(std::size_t i) const { return points_[i]; }
  const std::vector<QuantizedMeasure>& points() const { return points_; }

  /// phi_N image of catalog entry i.
  const PairMeasure& phi(std::size_t i) const;

 private:
  int num_sites_;
  int num_marginals_;
  std::vector<QuantizedMeasure> points_;
  mutable std::once_flag phis_once_;
  mutable std::vector<PairMeasure> phis_;
};

struct RepresentabilityCertificate {
  enum class Verdict { representable, not_representable };

  Verdict verdict;

  /// Mixture over catalog points reconstructing mu (representable case).
  std::optional<SAEState> witness;
  /// Entrywise reconstruction residual of the witness.
  double witness_residual = 0.0;

  /// Separating functional as a symmetric ell x ell matrix with unit
  /// max-norm (non-representable case): its value on mu exceeds its value
  /// on every catalog point by at least `margin`.
  std::optional<std::vector<double>> separating;
  double margin = 0.0;

  bool representable() const { return verdict == Verdict::representable; }
};

/// Convex-hull membership test for the catalog of phi_N images: solves the
/// LP feasibility problem over the catalog and returns either a witness
/// mixture (support bounded by the number of equality rows plus one) or a
/// separating functional from the phase-one dual.
RepresentabilityCertificate check_representable(
    const PairMeasure& mu, int num_marginals, double tol = 1e-8,
    std::uint64_t enumeration_limit = kDefaultEnumerationLimit);

}  // namespace mmot
