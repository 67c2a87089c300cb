#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mmot/costs.hpp"
#include "mmot/extremal.hpp"
#include "mmot/marginal.hpp"
#include "mmot/monge.hpp"
#include "mmot/quantized.hpp"
#include "mmot/sae_state.hpp"
#include "mmot/simplex.hpp"
#include "mmot/symmetric_plan.hpp"

namespace mmot {

struct SolverLimits {
  /// Catalog columns for the extremal-mixture LP and maximization LPs.
  std::uint64_t enumeration = kDefaultEnumerationLimit;
  /// ell^N atoms for the unreduced oracle LP.
  std::uint64_t oracle_atoms = 1'000'000;
  /// Distinct arrangements averaged per extreme_cost_general call.
  std::uint64_t arrangements = 1'000'000;
  /// (ell!)^(N-1) states visited by the Monge brute force.
  std::uint64_t monge_states = 10'000'000;
};

enum class Pricing { enumerate, local_search };

struct SolveOptions {
  Pricing pricing = Pricing::enumerate;
  int threads = 0;  // 0 = all cores, used for column cost evaluation
  std::uint64_t seed = 0;
  lp::PivotRule rule = lp::PivotRule::bland;
  SolverLimits limits;
};

enum class SolveOutcome {
  optimal,
  /// Every admissible plan has infinite cost (all catalog columns were
  /// excluded as infinite, or the finite ones cannot reach the marginal).
  infinite_cost,
};

struct SolveStats {
  std::uint64_t catalog_size = 0;
  std::uint64_t finite_columns = 0;
  std::uint64_t columns_generated = 0;  // column generation only
  int master_solves = 0;
  long pivots = 0;
  double wall_seconds = 0.0;
};

struct SolveReport {
  SolveOutcome outcome = SolveOutcome::optimal;
  double cost = 0.0;
  std::optional<SAEState> state;
  std::optional<SymmetricPlan> plan;
  /// Smallest nonbasic reduced cost at the final basis; zero margins can
  /// occur at degenerate ties even for unique optima.
  double uniqueness_margin = 0.0;
  bool unique_vertex = false;
  /// False only for heuristic pricing without a certification pass.
  bool certified_optimal = true;
  SolveStats stats;
};

/// Cost of the extreme plan attached to occupation vector q under a
/// pairwise cost: sum_{i<j} c_ij rho_i rho_j + sum_i c_ii rho_i(rho_i-1)/2.
/// +inf exactly when an occupied pair has infinite cost.
double extreme_cost_pairwise(const QuantizedMeasure& q, const PairwiseCost& cost);

/// Same for a general cost spec: the multiset-permutation average of c_N
/// over the arrangements of q's multi-index (one evaluation when the cost
/// is symmetric). Throws CapacityError past the arrangement budget.
double extreme_cost_general(const QuantizedMeasure& q, const CostSpec& cost,
                            std::uint64_t arrangement_budget = 1'000'000);

/// Kantorovich solve over the extremal-mixture ansatz: an LP over the full
/// catalog whose vertex solutions are supported on at most ell extreme
/// points. The report carries the expanded plan, realized maps, and the
/// final-basis uniqueness margin.
SolveReport solve_sae(const CostSpec& cost, const Marginal& marginal,
                      int num_marginals, const SolveOptions& options = {});

/// Column-generation variant for pairwise costs: a restricted master over
/// generated columns with enumerative or local-search pricing. Enumerative
/// pricing reproduces solve_sae exactly; local-search pricing yields an
/// upper bound flagged certified only when a certification pass proves all
/// reduced costs nonnegative.
SolveReport solve_colgen(const CostSpec& cost, const Marginal& marginal,
                         int num_marginals, const SolveOptions& options = {});

struct OracleReport {
  SolveOutcome outcome = SolveOutcome::optimal;
  double cost = 0.0;
  int num_sites = 0;
  int num_marginals = 0;
  /// Nonzero plan atoms (index tuples are not symmetrized).
  std::vector<std::pair<std::vector<int>, double>> atoms;
  SolveStats stats;
};

/// The unreduced Kantorovich LP over all ell^N atoms with the N*ell
/// per-coordinate marginal constraints, solved on the symmetrized cost;
/// its value equals the symmetric problem's value. Brute-force oracle for
/// cross-validation, capacity-limited.
OracleReport solve_oracle_full(const CostSpec& cost, const Marginal& marginal,
                               int num_marginals,
                               const SolveOptions& options = {});

struct MongeReport {
  SolveOutcome outcome = SolveOutcome::optimal;
  double cost = 0.0;
  std::optional<MongeState> best;
  std::optional<SymmetricPlan> plan;
  std::uint64_t states_visited = 0;
  double wall_seconds = 0.0;
};

/// Exhaustive minimum over symmetrized Monge states (uniform marginal by
/// construction; tau_1 = id without loss of generality).
MongeReport solve_monge_bruteforce(const CostSpec& cost, int num_marginals,
                                   const SolveOptions& options = {});

/// Overload that rejects non-uniform prescribed marginals.
MongeReport solve_monge_bruteforce(const CostSpec& cost, int num_marginals,
                                   const Marginal& marginal,
                                   const SolveOptions& options = {});

struct MaximizeReport {
  double value = 0.0;
  SAEState mixture;
  PairMeasure optimizer;
  /// Support-certificate margin (capped at 1); computed for quantized
  /// marginals only, where the optimum is a single catalog point.
  double uniqueness_margin = 0.0;
  bool unique = false;
  bool marginal_quantized = false;
  SolveStats stats;
};

/// Maximizes the discrete-metric transport cost over catalog mixtures with
/// the prescribed marginal. For quantized marginals the optimizer is the
/// phi_N image of the marginal, with value (N/(N-1))(1 - sum lambda_i^2),
/// and uniqueness is certified by the support margin.
MaximizeReport maximize_wasserstein(const Marginal& marginal, int num_marginals,
                                    const SolveOptions& options = {});

struct GsMaximizeReport {
  double value = 0.0;
  SAEState mixture;
  SymmetricPlan optimizer;
  double uniqueness_margin = 0.0;
  bool unique = false;
  bool marginal_quantized = false;
  SolveStats stats;
};

/// Same problem scaled to N points via the pair-marginal identity: value
/// binom(N,2) times the Wasserstein optimum, optimizer psi_N(N*lambda) for
/// quantized lambda.
GsMaximizeReport maximize_gs(const Marginal& marginal, int num_marginals,
                             const SolveOptions& options = {});

struct SoftMaxReport {
  double value = 0.0;
  QuantizedMeasure argmax;
  /// Gap to the runner-up catalog point (strictly positive by concavity).
  double runner_up_gap = 0.0;
};

/// Soft-constraint objective (2N/(N-1)) <lambda, M1 mu> + W[mu] maximized
/// over the unconstrained catalog.
SoftMaxReport maximize_wasserstein_soft(
    const Marginal& marginal, int num_marginals,
    std::uint64_t enumeration_limit = kDefaultEnumerationLimit);

/// Soft-constraint objective N^2 <lambda, M1 gamma> + C_GS[gamma] over the
/// extreme plans; equals binom(N,2) times the pair-measure version.
SoftMaxReport maximize_gs_soft(
    const Marginal& marginal, int num_marginals,
    std::uint64_t enumeration_limit = kDefaultEnumerationLimit);

}  // namespace mmot
