#include "mmot/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "mmot/combinatorics.hpp"
#include "mmot/errors.hpp"
#include "mmot/log.hpp"
#include "mmot/multi_index.hpp"
#include "mmot/parallel.hpp"

namespace mmot {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double pair_sum(const PairwiseCost& cost, std::span<const int> tuple) {
  double s = 0.0;
  for (std::size_t p = 0; p < tuple.size(); ++p)
    for (std::size_t q = p + 1; q < tuple.size(); ++q)
      s += cost.at(tuple[p], tuple[q]);
  return s;
}

void check_cost_dims(const CostSpec& cost, int num_sites, int num_marginals) {
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, PairwiseCost>) {
          if (c.size() != num_sites)
            throw ValidationError("pairwise cost size does not match state space");
        } else {
          if (c.num_sites != num_sites)
            throw ValidationError("cost num_sites does not match state space");
          if (c.num_marginals != num_marginals)
            throw ValidationError("cost num_marginals does not match N");
        }
      },
      cost);
}

// Evaluates F over the catalog as a parallel map; exceptions from worker
// threads are rethrown on the caller.
std::vector<double> catalog_costs(const std::vector<QuantizedMeasure>& catalog,
                                  const CostSpec& cost,
                                  const SolveOptions& options) {
  std::vector<double> F(catalog.size());
  std::exception_ptr error;
  std::mutex error_mu;
  parallel_for(catalog.size(), options.threads,
               [&](std::size_t begin, std::size_t end) {
                 try {
                   for (std::size_t i = begin; i < end; ++i)
                     F[i] = extreme_cost_general(catalog[i], cost,
                                                 options.limits.arrangements);
                 } catch (...) {
                   std::lock_guard<std::mutex> lock(error_mu);
                   if (!error) error = std::current_exception();
                 }
               });
  if (error) std::rethrow_exception(error);
  return F;
}

lp::LinearProgram marginal_lp(const std::vector<const QuantizedMeasure*>& columns,
                              const std::vector<double>& costs,
                              const Marginal& marginal, int num_marginals,
                              lp::Sense sense) {
  const int l = marginal.size();
  const int n = static_cast<int>(columns.size());
  lp::LinearProgram prog;
  prog.sense = sense;
  prog.A = lp::ColMatrix<double>(l, n);
  prog.b.resize(static_cast<std::size_t>(l));
  prog.c = costs;
  for (int i = 0; i < l; ++i)
    prog.b[static_cast<std::size_t>(i)] = num_marginals * marginal[i];
  for (int j = 0; j < n; ++j) {
    const auto& rho = columns[static_cast<std::size_t>(j)]->occupations();
    for (int i = 0; i < l; ++i)
      prog.A.at(i, j) = static_cast<double>(rho[static_cast<std::size_t>(i)]);
  }
  return prog;
}

std::vector<SAEState::Site> support_from_solution(
    const std::vector<const QuantizedMeasure*>& columns,
    const std::vector<double>& x) {
  std::vector<SAEState::Site> sites;
  for (std::size_t j = 0; j < columns.size(); ++j)
    if (x[j] > 1e-10) sites.push_back({x[j], *columns[j]});
  return sites;
}

// Shared tail of solve_sae / solve_colgen: build the state, expand, verify
// the marginal and the recomputed cost, fill the report.
void finalize_solve_report(SolveReport& report, const CostSpec& cost,
                           const Marginal& marginal, int num_marginals,
                           const SolveOptions& options,
                           const lp::LinearProgram& prog,
                           const lp::LPSolution& sol,
                           const std::vector<const QuantizedMeasure*>& columns) {
  const int l = marginal.size();
  SAEState state = SAEState::from_lp_weights(
      num_marginals, l, support_from_solution(columns, sol.x));
  if (state.support_size() > static_cast<std::size_t>(l))
    throw NumericalError("solver: vertex sparsity bound violated (" +
                         std::to_string(state.support_size()) + " > " +
                         std::to_string(l) + ")");
  state.realize_maps();
  SymmetricPlan plan = state.expand();

  const Marginal plan_marginal = plan.marginal_one();
  for (int i = 0; i < l; ++i)
    if (std::abs(plan_marginal[i] - marginal[i]) > 1e-8)
      throw NumericalError("solver: expanded plan marginal deviates from the "
                           "prescribed marginal beyond 1e-8");

  double direct = 0.0;
  for (const auto& [key, w] : plan.entries())
    direct += w * extreme_cost_general(
                      QuantizedMeasure(num_marginals, index_occupations(key, l)),
                      cost, options.limits.arrangements);
  if (std::abs(direct - sol.objective) > 1e-8 * (1.0 + std::abs(sol.objective)))
    throw NumericalError(
        "solver: recomputed plan cost deviates from the LP objective");

  report.outcome = SolveOutcome::optimal;
  report.cost = sol.objective;
  report.uniqueness_margin = lp::basis_margin(prog, sol);
  report.unique_vertex = report.uniqueness_margin > 1e-9;
  report.state = std::move(state);
  report.plan = std::move(plan);
  report.stats.pivots += sol.stats.pivots;
}

std::uint64_t checked_pow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > kCountOverflow / base) return kCountOverflow;
    r *= base;
  }
  return r;
}

}  // namespace

double extreme_cost_pairwise(const QuantizedMeasure& q, const PairwiseCost& cost) {
  if (q.size() != cost.size())
    throw ValidationError("extreme_cost_pairwise: dimension mismatch");
  const auto& rho = q.occupations();
  double s = 0.0;
  const int l = q.size();
  for (int i = 0; i < l; ++i) {
    const int ri = rho[static_cast<std::size_t>(i)];
    if (ri == 0) continue;
    if (ri >= 2) {
      const double cii = cost.at(i, i);
      if (std::isinf(cii)) return kInfiniteCost;
      s += cii * (static_cast<double>(ri) * (ri - 1) / 2.0);
    }
    for (int j = i + 1; j < l; ++j) {
      const int rj = rho[static_cast<std::size_t>(j)];
      if (rj == 0) continue;
      const double cij = cost.at(i, j);
      if (std::isinf(cij)) return kInfiniteCost;
      s += cij * static_cast<double>(ri) * rj;
    }
  }
  return s;
}

double extreme_cost_general(const QuantizedMeasure& q, const CostSpec& cost,
                            std::uint64_t arrangement_budget) {
  if (const auto* pw = std::get_if<PairwiseCost>(&cost))
    return extreme_cost_pairwise(q, *pw);

  const MultiIndex canonical = index_from_occupations(q.occupations());
  if (const auto* table = std::get_if<NBodyTable>(&cost)) {
    if (table->num_sites != q.size() || table->num_marginals != q.num_marginals())
      throw ValidationError("extreme_cost_general: table dimension mismatch");
    return table->at(canonical);
  }

  const auto& callable = std::get<NBodyCallable>(cost);
  if (callable.num_sites != q.size() ||
      callable.num_marginals != q.num_marginals())
    throw ValidationError("extreme_cost_general: callable dimension mismatch");
  if (callable.symmetric) {
    const double v = callable.fn(canonical);
    if (std::isnan(v)) throw ValidationError("cost evaluator returned NaN");
    return v;
  }

  const std::uint64_t count = arrangement_count(q.occupations());
  if (count > arrangement_budget)
    throw CapacityError("arrangement average needs " + std::to_string(count) +
                        " evaluations, budget is " +
                        std::to_string(arrangement_budget));
  std::vector<int> tuple = canonical;
  double sum = 0.0;
  std::uint64_t visited = 0;
  do {
    const double v = callable.fn(tuple);
    if (std::isnan(v)) throw ValidationError("cost evaluator returned NaN");
    if (v == -kInfiniteCost)
      throw ValidationError("cost evaluator returned -inf");
    sum += v;
    ++visited;
  } while (std::next_permutation(tuple.begin(), tuple.end()));
  return std::isinf(sum) ? kInfiniteCost : sum / static_cast<double>(visited);
}

SolveReport solve_sae(const CostSpec& cost, const Marginal& marginal,
                      int num_marginals, const SolveOptions& options) {
  const auto start = Clock::now();
  const int l = cost_num_sites(cost);
  if (marginal.size() != l)
    throw ValidationError("solve_sae: marginal size does not match the cost");
  if (num_marginals < 1) throw ValidationError("solve_sae: N must be >= 1");
  check_cost_dims(cost, l, num_marginals);

  const std::vector<QuantizedMeasure> catalog =
      enumerate_quantized(l, num_marginals, options.limits.enumeration);
  const std::vector<double> F = catalog_costs(catalog, cost, options);

  std::vector<const QuantizedMeasure*> columns;
  std::vector<double> costs;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    if (std::isinf(F[i])) continue;
    columns.push_back(&catalog[i]);
    costs.push_back(F[i]);
  }

  SolveReport report;
  report.stats.catalog_size = catalog.size();
  report.stats.finite_columns = columns.size();
  report.stats.master_solves = 1;

  if (columns.empty()) {
    report.outcome = SolveOutcome::infinite_cost;
    report.cost = kInfiniteCost;
    report.stats.wall_seconds = seconds_since(start);
    return report;
  }

  const lp::LinearProgram prog =
      marginal_lp(columns, costs, marginal, num_marginals, lp::Sense::minimize);
  lp::SimplexOptions lp_options;
  lp_options.rule = options.rule;
  const lp::LPSolution sol = lp::solve(prog, lp_options);

  if (sol.status == lp::SolveStatus::infeasible) {
    if (columns.size() < catalog.size()) {
      report.outcome = SolveOutcome::infinite_cost;
      report.cost = kInfiniteCost;
      report.stats.wall_seconds = seconds_since(start);
      return report;
    }
    throw NumericalError(
        "solve_sae: catalog LP infeasible for a valid marginal (internal bug)");
  }
  if (sol.status != lp::SolveStatus::optimal)
    throw NumericalError("solve_sae: catalog LP ended in unexpected state");

  finalize_solve_report(report, cost, marginal, num_marginals, options, prog,
                        sol, columns);
  report.stats.wall_seconds = seconds_since(start);
  return report;
}

namespace {

// Local-search pricer over occupation vectors: steepest descent on
// objective(rho), moving one unit of occupation between two sites, with
// seeded random restarts. Returns the best visited vector.
class LocalSearchPricer {
 public:
  LocalSearchPricer(int num_sites, int num_marginals, std::uint64_t seed)
      : l_(num_sites), n_(num_marginals), rng_(seed) {}

  template <class Objective>
  std::pair<std::vector<int>, double> minimize(const Objective& objective,
                                               const Marginal& marginal,
                                               int restarts = 20) {
    std::vector<int> best;
    double best_value = kInfiniteCost;
    for (int r = 0; r < restarts; ++r) {
      std::vector<int> rho =
          (r == 0) ? rounded_start(marginal) : random_start();
      double value = objective(rho);
      for (;;) {
        double move_value = value;
        int move_from = -1, move_to = -1;
        for (int i = 0; i < l_; ++i) {
          if (rho[static_cast<std::size_t>(i)] == 0) continue;
          for (int j = 0; j < l_; ++j) {
            if (j == i) continue;
            --rho[static_cast<std::size_t>(i)];
            ++rho[static_cast<std::size_t>(j)];
            const double v = objective(rho);
            ++rho[static_cast<std::size_t>(i)];
            --rho[static_cast<std::size_t>(j)];
            if (v < move_value - 1e-12) {
              move_value = v;
              move_from = i;
              move_to = j;
            }
          }
        }
        if (move_from < 0) break;
        --rho[static_cast<std::size_t>(move_from)];
        ++rho[static_cast<std::size_t>(move_to)];
        value = move_value;
      }
      if (value < best_value) {
        best_value = value;
        best = rho;
      }
    }
    return {best, best_value};
  }

 private:
  std::vector<int> rounded_start(const Marginal& marginal) {
    // Largest-remainder rounding of N*lambda.
    std::vector<int> rho(static_cast<std::size_t>(l_), 0);
    std::vector<std::pair<double, int>> remainders;
    int assigned = 0;
    for (int i = 0; i < l_; ++i) {
      const double exact = n_ * marginal[i];
      rho[static_cast<std::size_t>(i)] = static_cast<int>(std::floor(exact));
      assigned += rho[static_cast<std::size_t>(i)];
      remainders.push_back({exact - std::floor(exact), i});
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (int k = 0; k < n_ - assigned; ++k)
      ++rho[static_cast<std::size_t>(
          remainders[static_cast<std::size_t>(k) % remainders.size()].second)];
    return rho;
  }

  std::vector<int> random_start() {
    std::vector<int> rho(static_cast<std::size_t>(l_), 0);
    std::uniform_int_distribution<int> site(0, l_ - 1);
    for (int k = 0; k < n_; ++k) ++rho[static_cast<std::size_t>(site(rng_))];
    return rho;
  }

  int l_;
  int n_;
  std::mt19937_64 rng_;
};

}  // namespace

SolveReport solve_colgen(const CostSpec& cost, const Marginal& marginal,
                         int num_marginals, const SolveOptions& options) {
  const auto start = Clock::now();
  const auto* pairwise = std::get_if<PairwiseCost>(&cost);
  if (pairwise == nullptr)
    throw ValidationError("solve_colgen requires a pairwise cost");
  const int l = pairwise->size();
  if (marginal.size() != l)
    throw ValidationError("solve_colgen: marginal size does not match the cost");
  if (num_marginals < 1) throw ValidationError("solve_colgen: N must be >= 1");

  const std::uint64_t catalog_size = quantized_count(l, num_marginals);
  const bool enumerable = catalog_size <= options.limits.enumeration;
  if (options.pricing == Pricing::enumerate && !enumerable)
    throw CapacityError("enumerative pricing needs the catalog within the "
                        "enumeration limit; use local-search pricing");

  SolveReport report;
  report.stats.catalog_size = catalog_size;

  std::vector<QuantizedMeasure> columns;
  std::vector<double> costs;
  std::set<std::vector<int>> added;
  const auto add_column = [&](const std::vector<int>& rho) {
    if (added.contains(rho)) return false;
    QuantizedMeasure q(num_marginals, rho);
    const double f = extreme_cost_pairwise(q, *pairwise);
    if (std::isinf(f)) return false;
    added.insert(rho);
    columns.push_back(std::move(q));
    costs.push_back(f);
    return true;
  };

  const auto objective_f = [&](const std::vector<int>& rho) {
    return extreme_cost_pairwise(QuantizedMeasure(num_marginals, rho), *pairwise);
  };

  // Starter columns.
  if (options.pricing == Pricing::enumerate) {
    // One pass: the cheapest column plus, per site, the finite column with
    // the most mass on that site.
    std::vector<std::vector<int>> per_site(static_cast<std::size_t>(l));
    std::vector<int> per_site_load(static_cast<std::size_t>(l), -1);
    std::vector<int> cheapest;
    double cheapest_f = kInfiniteCost;
    for_each_occupation(l, num_marginals, [&](std::span<const int> rho) {
      std::vector<int> v(rho.begin(), rho.end());
      const double f = objective_f(v);
      if (std::isinf(f)) return;
      if (f < cheapest_f) {
        cheapest_f = f;
        cheapest = v;
      }
      for (int i = 0; i < l; ++i)
        if (rho[static_cast<std::size_t>(i)] > per_site_load[static_cast<std::size_t>(i)]) {
          per_site_load[static_cast<std::size_t>(i)] = rho[static_cast<std::size_t>(i)];
          per_site[static_cast<std::size_t>(i)] = v;
        }
    });
    if (!cheapest.empty()) add_column(cheapest);
    for (const auto& v : per_site)
      if (!v.empty()) add_column(v);
  } else {
    LocalSearchPricer pricer(l, num_marginals, options.seed);
    const auto [rho, value] = pricer.minimize(objective_f, marginal);
    if (!std::isinf(value)) add_column(rho);
  }

  if (columns.empty()) {
    report.outcome = SolveOutcome::infinite_cost;
    report.cost = kInfiniteCost;
    report.stats.wall_seconds = seconds_since(start);
    return report;
  }

  lp::SimplexOptions lp_options;
  lp_options.rule = options.rule;

  lp::LinearProgram master;
  lp::LPSolution sol;
  bool certified = true;
  LocalSearchPricer pricer(l, num_marginals, options.seed + 1);

  for (;;) {
    std::vector<const QuantizedMeasure*> column_ptrs;
    column_ptrs.reserve(columns.size());
    for (const auto& q : columns) column_ptrs.push_back(&q);
    master = marginal_lp(column_ptrs, costs, marginal, num_marginals,
                         lp::Sense::minimize);
    sol = lp::solve(master, lp_options);
    ++report.stats.master_solves;
    report.stats.pivots += sol.stats.pivots;

    if (sol.status == lp::SolveStatus::infeasible) {
      // Farkas pricing: a column with positive certificate value restores
      // progress toward feasibility; none over the whole finite catalog
      // proves the optimum is infinite.
      const std::vector<double>& y = sol.farkas;
      const auto farkas_value = [&](const std::vector<int>& rho) {
        double s = 0.0;
        for (int i = 0; i < l; ++i) s += y[static_cast<std::size_t>(i)] * rho[static_cast<std::size_t>(i)];
        return s;
      };
      if (options.pricing == Pricing::enumerate) {
        std::vector<int> best;
        double best_value = 0.0;
        for_each_occupation(l, num_marginals, [&](std::span<const int> rho) {
          std::vector<int> v(rho.begin(), rho.end());
          if (added.contains(v) || std::isinf(objective_f(v))) return;
          const double s = farkas_value(v);
          if (s > best_value + 1e-12) {
            best_value = s;
            best = v;
          }
        });
        if (best.empty()) {
          report.outcome = SolveOutcome::infinite_cost;
          report.cost = kInfiniteCost;
          report.stats.columns_generated = columns.size();
          report.stats.wall_seconds = seconds_since(start);
          return report;
        }
        add_column(best);
        continue;
      }
      const auto neg_farkas = [&](const std::vector<int>& rho) {
        if (std::isinf(objective_f(rho))) return kInfiniteCost;
        return -farkas_value(rho);
      };
      const auto [rho, value] = pricer.minimize(neg_farkas, marginal);
      if (std::isinf(value) || -value <= 1e-9 || !add_column(rho))
        throw CapacityError(
            "solve_colgen: local-search pricing could not restore master "
            "feasibility; rerun with enumerative pricing");
      continue;
    }
    if (sol.status != lp::SolveStatus::optimal)
      throw NumericalError("solve_colgen: master LP ended in unexpected state");

    const std::vector<double>& y = sol.duals;
    const auto reduced_cost = [&](const std::vector<int>& rho, double f) {
      double s = f;
      for (int i = 0; i < l; ++i)
        s -= y[static_cast<std::size_t>(i)] * rho[static_cast<std::size_t>(i)];
      return s;
    };
    const double rc_tol = 1e-9 * (1.0 + std::abs(sol.objective));

    if (options.pricing == Pricing::enumerate) {
      std::vector<int> best;
      double best_rc = -rc_tol;
      for_each_occupation(l, num_marginals, [&](std::span<const int> rho) {
        std::vector<int> v(rho.begin(), rho.end());
        if (added.contains(v)) return;
        const double f = objective_f(v);
        if (std::isinf(f)) return;
        const double rc = reduced_cost(v, f);
        if (rc < best_rc) {
          best_rc = rc;
          best = v;
        }
      });
      if (best.empty()) break;  // optimal: all reduced costs >= -tol
      add_column(best);
      continue;
    }

    // Local-search pricing.
    const auto rc_objective = [&](const std::vector<int>& rho) {
      const double f = objective_f(rho);
      if (std::isinf(f)) return kInfiniteCost;
      return reduced_cost(rho, f);
    };
    const auto [rho, value] = pricer.minimize(rc_objective, marginal);
    if (!std::isinf(value) && value < -rc_tol && add_column(rho)) continue;

    // Stalled: certify when the catalog is enumerable, otherwise flag the
    // result as a heuristic upper bound.
    if (enumerable) {
      bool clean = true;
      for_each_occupation(l, num_marginals, [&](std::span<const int> rho_span) {
        if (!clean) return;
        std::vector<int> v(rho_span.begin(), rho_span.end());
        const double f = objective_f(v);
        if (std::isinf(f) || added.contains(v)) return;
        if (reduced_cost(v, f) < -rc_tol) clean = false;
      });
      certified = clean;
    } else {
      certified = false;
    }
    break;
  }

  report.stats.columns_generated = columns.size();
  report.stats.finite_columns = columns.size();
  report.certified_optimal = certified;
  {
    std::vector<const QuantizedMeasure*> column_ptrs;
    for (const auto& q : columns) column_ptrs.push_back(&q);
    finalize_solve_report(report, cost, marginal, num_marginals, options,
                          master, sol, column_ptrs);
  }
  report.stats.wall_seconds = seconds_since(start);
  return report;
}

OracleReport solve_oracle_full(const CostSpec& cost, const Marginal& marginal,
                               int num_marginals, const SolveOptions& options) {
  const auto start = Clock::now();
  const int l = cost_num_sites(cost);
  if (marginal.size() != l)
    throw ValidationError("solve_oracle_full: marginal size mismatch");
  if (num_marginals < 1) throw ValidationError("solve_oracle_full: N >= 1");
  check_cost_dims(cost, l, num_marginals);

  const std::uint64_t atoms = checked_pow(static_cast<std::uint64_t>(l),
                                          num_marginals);
  if (atoms > options.limits.oracle_atoms)
    throw CapacityError("oracle needs " + std::to_string(atoms) +
                        " atoms, limit is " +
                        std::to_string(options.limits.oracle_atoms));

  OracleReport report;
  report.num_sites = l;
  report.num_marginals = num_marginals;
  report.stats.catalog_size = atoms;

  // Symmetrized cost per sorted class for non-symmetric evaluators.
  const auto* pairwise = std::get_if<PairwiseCost>(&cost);
  const auto* table = std::get_if<NBodyTable>(&cost);
  const auto* callable = std::get_if<NBodyCallable>(&cost);
  std::map<MultiIndex, double> class_cache;
  const auto atom_cost = [&](const std::vector<int>& tuple) {
    if (pairwise) return pair_sum(*pairwise, tuple);
    if (table) return table->at(tuple);
    if (callable->symmetric) return callable->fn(tuple);
    const MultiIndex key = sorted_index(tuple);
    const auto it = class_cache.find(key);
    if (it != class_cache.end()) return it->second;
    const double v = extreme_cost_general(
        QuantizedMeasure(num_marginals, index_occupations(key, l)), cost,
        options.limits.arrangements);
    class_cache.emplace(key, v);
    return v;
  };

  // Enumerate atoms in mixed-radix order, keeping the finite-cost ones.
  std::vector<std::uint64_t> finite_atoms;
  std::vector<double> finite_costs;
  std::vector<int> tuple(static_cast<std::size_t>(num_marginals), 0);
  for (std::uint64_t id = 0; id < atoms; ++id) {
    const double v = atom_cost(tuple);
    if (std::isnan(v))
      throw ValidationError("oracle: cost evaluator returned NaN");
    if (!std::isinf(v)) {
      finite_atoms.push_back(id);
      finite_costs.push_back(v);
    }
    for (int k = num_marginals - 1; k >= 0; --k) {
      if (++tuple[static_cast<std::size_t>(k)] < l) break;
      tuple[static_cast<std::size_t>(k)] = 0;
    }
  }
  report.stats.finite_columns = finite_atoms.size();

  if (finite_atoms.empty()) {
    report.outcome = SolveOutcome::infinite_cost;
    report.cost = kInfiniteCost;
    report.stats.wall_seconds = seconds_since(start);
    return report;
  }

  const auto decode = [&](std::uint64_t id) {
    std::vector<int> t(static_cast<std::size_t>(num_marginals));
    for (int k = num_marginals - 1; k >= 0; --k) {
      t[static_cast<std::size_t>(k)] = static_cast<int>(id % l);
      id /= static_cast<std::uint64_t>(l);
    }
    return t;
  };

  const int m = num_marginals * l;
  const int n = static_cast<int>(finite_atoms.size());
  lp::LinearProgram prog;
  prog.sense = lp::Sense::minimize;
  prog.A = lp::ColMatrix<double>(m, n);
  prog.b.resize(static_cast<std::size_t>(m));
  prog.c = finite_costs;
  for (int k = 0; k < num_marginals; ++k)
    for (int i = 0; i < l; ++i)
      prog.b[static_cast<std::size_t>(k * l + i)] = marginal[i];
  for (int j = 0; j < n; ++j) {
    const std::vector<int> t = decode(finite_atoms[static_cast<std::size_t>(j)]);
    for (int k = 0; k < num_marginals; ++k)
      prog.A.at(k * l + t[static_cast<std::size_t>(k)], j) = 1.0;
  }

  lp::SimplexOptions lp_options;
  lp_options.rule = options.rule;
  const lp::LPSolution sol = lp::solve(prog, lp_options);
  report.stats.pivots = sol.stats.pivots;
  report.stats.master_solves = 1;

  if (sol.status == lp::SolveStatus::infeasible) {
    if (finite_atoms.size() < atoms) {
      report.outcome = SolveOutcome::infinite_cost;
      report.cost = kInfiniteCost;
      report.stats.wall_seconds = seconds_since(start);
      return report;
    }
    throw NumericalError(
        "oracle: full LP infeasible for a valid marginal (internal bug)");
  }
  if (sol.status != lp::SolveStatus::optimal)
    throw NumericalError("oracle: LP ended in unexpected state");

  report.cost = sol.objective;
  for (int j = 0; j < n; ++j)
    if (sol.x[static_cast<std::size_t>(j)] > 1e-10)
      report.atoms.push_back({decode(finite_atoms[static_cast<std::size_t>(j)]),
                              sol.x[static_cast<std::size_t>(j)]});
  report.stats.wall_seconds = seconds_since(start);
  return report;
}

MongeReport solve_monge_bruteforce(const CostSpec& cost, int num_marginals,
                                   const Marginal& marginal,
                                   const SolveOptions& options) {
  const int l = cost_num_sites(cost);
  if (marginal.size() != l)
    throw ValidationError("solve_monge_bruteforce: marginal size mismatch");
  for (int i = 0; i < l; ++i)
    if (std::abs(marginal[i] - 1.0 / l) > 1e-9)
      throw ValidationError(
          "solve_monge_bruteforce: Monge states require the uniform marginal");
  return solve_monge_bruteforce(cost, num_marginals, options);
}

MongeReport solve_monge_bruteforce(const CostSpec& cost, int num_marginals,
                                   const SolveOptions& options) {
  const auto start = Clock::now();
  const int l = cost_num_sites(cost);
  if (num_marginals < 1)
    throw ValidationError("solve_monge_bruteforce: N >= 1");
  check_cost_dims(cost, l, num_marginals);

  std::vector<std::vector<int>> perms;
  {
    std::vector<int> p(static_cast<std::size_t>(l));
    std::iota(p.begin(), p.end(), 0);
    do {
      perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
  }
  const std::uint64_t states =
      checked_pow(static_cast<std::uint64_t>(perms.size()), num_marginals - 1);
  if (states > options.limits.monge_states)
    throw CapacityError("Monge brute force needs " + std::to_string(states) +
                        " states, limit is " +
                        std::to_string(options.limits.monge_states));

  const auto* pairwise = std::get_if<PairwiseCost>(&cost);
  const auto* table = std::get_if<NBodyTable>(&cost);
  const auto* callable = std::get_if<NBodyCallable>(&cost);
  const auto tuple_cost = [&](const std::vector<int>& tuple) {
    if (pairwise) return pair_sum(*pairwise, tuple);
    if (table) return table->at(tuple);
    if (callable->symmetric) return callable->fn(tuple);
    return extreme_cost_general(
        QuantizedMeasure(num_marginals, index_occupations(tuple, l)), cost,
        options.limits.arrangements);
  };

  MongeReport report;
  std::vector<std::size_t> odometer(
      static_cast<std::size_t>(std::max(0, num_marginals - 1)), 0);
  std::vector<std::size_t> best_odometer;
  double best = kInfiniteCost;
  std::vector<int> tuple(static_cast<std::size_t>(num_marginals));

  for (std::uint64_t s = 0; s < states; ++s) {
    double value = 0.0;
    for (int nu = 0; nu < l && !std::isinf(value); ++nu) {
      tuple[0] = nu;  // tau_1 = id
      for (int k = 1; k < num_marginals; ++k)
        tuple[static_cast<std::size_t>(k)] =
            perms[odometer[static_cast<std::size_t>(k - 1)]]
                 [static_cast<std::size_t>(nu)];
      const double c = tuple_cost(tuple);
      if (std::isnan(c))
        throw ValidationError("Monge brute force: cost evaluator returned NaN");
      value = std::isinf(c) ? kInfiniteCost : value + c / l;
    }
    if (value < best) {
      best = value;
      best_odometer = odometer;
    }
    for (std::size_t k = odometer.size(); k-- > 0;) {
      if (++odometer[k] < perms.size()) break;
      odometer[k] = 0;
    }
  }
  report.states_visited = states;

  if (std::isinf(best)) {
    report.outcome = SolveOutcome::infinite_cost;
    report.cost = kInfiniteCost;
    report.wall_seconds = seconds_since(start);
    return report;
  }

  std::vector<std::vector<int>> maps;
  maps.reserve(static_cast<std::size_t>(num_marginals));
  {
    std::vector<int> id(static_cast<std::size_t>(l));
    std::iota(id.begin(), id.end(), 0);
    maps.push_back(std::move(id));
  }
  for (int k = 1; k < num_marginals; ++k)
    maps.push_back(perms[best_odometer[static_cast<std::size_t>(k - 1)]]);

  MongeState state(l, std::move(maps));
  report.cost = best;
  report.plan = state.expand();
  report.best = std::move(state);
  report.wall_seconds = seconds_since(start);
  return report;
}

namespace {

double wasserstein_of_column(const QuantizedMeasure& q) {
  const int n = q.num_marginals();
  double sq = 0.0;
  for (int r : q.occupations()) {
    const double lam = static_cast<double>(r) / n;
    sq += lam * lam;
  }
  return (static_cast<double>(n) / (n - 1)) * (1.0 - sq);
}

}  // namespace

MaximizeReport maximize_wasserstein(const Marginal& marginal, int num_marginals,
                                    const SolveOptions& options) {
  const auto start = Clock::now();
  if (num_marginals < 2)
    throw ValidationError("maximize_wasserstein needs N >= 2");
  const int l = marginal.size();
  const std::vector<QuantizedMeasure> catalog =
      enumerate_quantized(l, num_marginals, options.limits.enumeration);

  std::vector<const QuantizedMeasure*> columns;
  std::vector<double> values;
  columns.reserve(catalog.size());
  values.reserve(catalog.size());
  for (const auto& q : catalog) {
    columns.push_back(&q);
    values.push_back(wasserstein_of_column(q));
  }

  const lp::LinearProgram prog =
      marginal_lp(columns, values, marginal, num_marginals, lp::Sense::maximize);
  lp::SimplexOptions lp_options;
  lp_options.rule = options.rule;
  const lp::LPSolution sol = lp::solve(prog, lp_options);
  if (sol.status != lp::SolveStatus::optimal)
    throw NumericalError(
        "maximize_wasserstein: catalog LP must be feasible and bounded");

  SAEState mixture = SAEState::from_lp_weights(
      num_marginals, l, support_from_solution(columns, sol.x));

  // Optimizer = weighted sum of phi images; mathematically nonnegative,
  // so only rounding dust may dip below zero.
  std::vector<double> acc(static_cast<std::size_t>(l) * l, 0.0);
  for (const auto& site : mixture.support()) {
    const PairMeasure img = phi_n(site.distribution.marginal(), num_marginals);
    for (std::size_t k = 0; k < acc.size(); ++k)
      acc[k] += site.weight * img.data()[k];
  }
  for (double& v : acc) {
    if (v < 0.0) {
      if (v < -1e-12)
        throw NumericalError("maximize_wasserstein: optimizer went negative");
      v = 0.0;
    }
  }
  // Exact symmetry may be lost to clamping; rebuild from the upper triangle.
  std::vector<double> upper;
  upper.reserve(static_cast<std::size_t>(l) * (l + 1) / 2);
  for (int i = 0; i < l; ++i)
    for (int j = i; j < l; ++j)
      upper.push_back(acc[static_cast<std::size_t>(i) * l + j]);

  MaximizeReport report{.value = sol.objective,
                        .mixture = std::move(mixture),
                        .optimizer = PairMeasure::from_upper_triangle(l, upper),
                        .uniqueness_margin = 0.0,
                        .unique = false,
                        .marginal_quantized =
                            marginal.is_quantized(num_marginals),
                        .stats = {}};
  report.stats.catalog_size = catalog.size();
  report.stats.finite_columns = catalog.size();
  report.stats.pivots = sol.stats.pivots;
  report.stats.master_solves = 1;

  if (report.marginal_quantized) {
    std::vector<int> support_cols;
    for (int j = 0; j < static_cast<int>(columns.size()); ++j)
      if (sol.x[static_cast<std::size_t>(j)] > 1e-10) support_cols.push_back(j);
    report.uniqueness_margin = lp::support_margin(prog, support_cols);
    report.unique = report.uniqueness_margin > 1e-9;
  }
  report.stats.wall_seconds = seconds_since(start);
  return report;
}

GsMaximizeReport maximize_gs(const Marginal& marginal, int num_marginals,
                             const SolveOptions& options) {
  MaximizeReport w = maximize_wasserstein(marginal, num_marginals, options);
  const double pairs =
      0.5 * num_marginals * (static_cast<double>(num_marginals) - 1.0);
  SymmetricPlan plan = w.mixture.expand();
  return GsMaximizeReport{.value = pairs * w.value,
                          .mixture = std::move(w.mixture),
                          .optimizer = std::move(plan),
                          .uniqueness_margin = w.uniqueness_margin,
                          .unique = w.unique,
                          .marginal_quantized = w.marginal_quantized,
                          .stats = w.stats};
}

SoftMaxReport maximize_wasserstein_soft(const Marginal& marginal,
                                        int num_marginals,
                                        std::uint64_t enumeration_limit) {
  if (num_marginals < 2)
    throw ValidationError("maximize_wasserstein_soft needs N >= 2");
  const int l = marginal.size();
  const double weight = 2.0 * num_marginals / (num_marginals - 1.0);

  std::optional<QuantizedMeasure> best;
  double best_value = -std::numeric_limits<double>::infinity();
  double second_value = -std::numeric_limits<double>::infinity();
  // Capacity-guard the streamed scan as well.
  if (quantized_count(l, num_marginals) > enumeration_limit)
    throw CapacityError("soft maximization catalog exceeds enumeration limit");
  for_each_occupation(l, num_marginals, [&](std::span<const int> rho) {
    QuantizedMeasure q(num_marginals, std::vector<int>(rho.begin(), rho.end()));
    double dot = 0.0;
    for (int i = 0; i < l; ++i)
      dot += marginal[i] * q.occupation(i) / static_cast<double>(num_marginals);
    const double value = weight * dot + wasserstein_of_column(q);
    if (value > best_value) {
      second_value = best_value;
      best_value = value;
      best = std::move(q);
    } else if (value > second_value) {
      second_value = value;
    }
  });
  return SoftMaxReport{.value = best_value,
                       .argmax = std::move(*best),
                       .runner_up_gap = best_value - second_value};
}

SoftMaxReport maximize_gs_soft(const Marginal& marginal, int num_marginals,
                               std::uint64_t enumeration_limit) {
  SoftMaxReport w =
      maximize_wasserstein_soft(marginal, num_marginals, enumeration_limit);
  const double pairs =
      0.5 * num_marginals * (static_cast<double>(num_marginals) - 1.0);
  return SoftMaxReport{.value = pairs * w.value,
                       .argmax = std::move(w.argmax),
                       .runner_up_gap = pairs * w.runner_up_gap};
}

}  // namespace mmot
