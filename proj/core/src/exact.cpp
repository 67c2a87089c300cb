#include "mmot/exact.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "mmot/detail/margin_aux.hpp"
#include "mmot/detail/simplex_engine.hpp"
#include "mmot/errors.hpp"
#include "mmot/log.hpp"

namespace mmot::lp {

namespace {

detail::EngineOptions<mmot::Rational> exact_options() {
  detail::EngineOptions<mmot::Rational> opts;
  opts.rule = PivotRule::bland;
  // Rebuilding the exact LU often keeps the rationals small.
  opts.refactor_every = 20;
  opts.tol = {};  // all-zero thresholds: exact comparisons
  opts.tol.condition_limit = 0.0;
  if (mmot::log_level() >= mmot::LogLevel::debug)
    opts.trace = [](const std::string& line) {
      mmot::log_line(mmot::LogLevel::debug, line);
    };
  return opts;
}

}  // namespace

RationalSolution solve_exact(const RationalProgram& prog) {
  if (prog.rows() < 1 || prog.cols() < 1)
    throw ValidationError("exact LP needs m >= 1 and n >= 1");
  if (prog.cols() > kExactColumnLimit)
    throw CapacityError("exact mode handles at most " +
                        std::to_string(kExactColumnLimit) + " columns, got " +
                        std::to_string(prog.cols()));
  if (static_cast<int>(prog.b.size()) != prog.rows() ||
      static_cast<int>(prog.c.size()) != prog.cols())
    throw ValidationError("exact LP: inconsistent dimensions");

  const bool maximize = prog.sense == Sense::maximize;
  std::vector<mmot::Rational> c = prog.c;
  if (maximize)
    for (auto& v : c) v = -v;

  detail::SimplexEngine<mmot::Rational> engine(prog.A, prog.b, std::move(c),
                                               exact_options());
  detail::EngineResult<mmot::Rational> er = engine.run();

  RationalSolution sol;
  sol.status = er.status;
  sol.stats = er.stats;
  if (er.status == SolveStatus::infeasible) {
    sol.farkas = std::move(er.farkas);
    return sol;
  }
  if (er.status == SolveStatus::unbounded) return sol;
  sol.x = std::move(er.x);
  sol.basis = std::move(er.basis);
  sol.objective = maximize ? mmot::Rational(-er.objective) : er.objective;
  sol.duals = std::move(er.duals);
  sol.reduced_costs = std::move(er.reduced_costs);
  if (maximize) {
    for (auto& v : sol.duals) v = -v;
    for (auto& v : sol.reduced_costs) v = -v;
  }
  return sol;
}

mmot::Rational support_margin_exact(const RationalProgram& prog,
                                    std::span<const int> support,
                                    const mmot::Rational& cap) {
  if (support.empty())
    throw ValidationError("support_margin_exact needs a nonempty support");
  std::vector<char> in_support(static_cast<std::size_t>(prog.cols()), 0);
  for (int j : support) {
    if (j < 0 || j >= prog.cols())
      throw ValidationError("support_margin_exact: column index out of range");
    in_support[static_cast<std::size_t>(j)] = 1;
  }
  std::vector<mmot::Rational> c_min = prog.c;
  if (prog.sense == Sense::maximize)
    for (auto& v : c_min) v = -v;

  const detail::MarginAux<mmot::Rational> aux =
      detail::build_margin_aux(prog.A, c_min, in_support, cap);
  RationalProgram margin_prog;
  margin_prog.sense = Sense::minimize;
  margin_prog.A = aux.A;
  margin_prog.b = aux.b;
  margin_prog.c = aux.c;
  const RationalSolution sol = solve_exact(margin_prog);
  if (sol.status != SolveStatus::optimal)
    throw NumericalError(
        "support_margin_exact: certificate LP failed; the support is likely "
        "not optimal");
  return sol.x[static_cast<std::size_t>(aux.t_column)];
}

}  // namespace mmot::lp

namespace mmot {

std::vector<Rational> rational_uniform(int num_sites) {
  if (num_sites < 1) throw ValidationError("rational_uniform needs ell >= 1");
  return std::vector<Rational>(static_cast<std::size_t>(num_sites),
                               Rational(1, num_sites));
}

std::vector<Rational> rational_from_marginal(const Marginal& marginal) {
  std::vector<Rational> out;
  out.reserve(static_cast<std::size_t>(marginal.size()));
  for (double v : marginal.weights()) out.push_back(rational_from_double(v));
  return out;
}

ExactSolveReport solve_sae_exact(const PairwiseCost& cost,
                                 const std::vector<Rational>& marginal,
                                 int num_marginals,
                                 std::uint64_t enumeration_limit) {
  const int l = cost.size();
  if (static_cast<int>(marginal.size()) != l)
    throw ValidationError("solve_sae_exact: marginal size mismatch");
  if (num_marginals < 1) throw ValidationError("solve_sae_exact: N >= 1");
  Rational mass(0);
  for (const Rational& v : marginal) {
    if (v < 0) throw ValidationError("solve_sae_exact: negative marginal entry");
    mass += v;
  }
  if (mass != Rational(1))
    throw ValidationError("solve_sae_exact: marginal mass must be exactly 1");

  const std::vector<QuantizedMeasure> catalog =
      enumerate_quantized(l, num_marginals, enumeration_limit);

  // Exact column costs via the pair-count form; infinite entries exclude
  // the column.
  std::vector<const QuantizedMeasure*> columns;
  std::vector<Rational> costs;
  for (const QuantizedMeasure& q : catalog) {
    Rational f(0);
    bool infinite = false;
    const auto& rho = q.occupations();
    for (int i = 0; i < l && !infinite; ++i) {
      const int ri = rho[static_cast<std::size_t>(i)];
      if (ri == 0) continue;
      if (ri >= 2) {
        const double cii = cost.at(i, i);
        if (std::isinf(cii)) {
          infinite = true;
          break;
        }
        f += rational_from_double(cii) * Rational(ri * (ri - 1), 2);
      }
      for (int j = i + 1; j < l; ++j) {
        const int rj = rho[static_cast<std::size_t>(j)];
        if (rj == 0) continue;
        const double cij = cost.at(i, j);
        if (std::isinf(cij)) {
          infinite = true;
          break;
        }
        f += rational_from_double(cij) * Rational(ri * rj);
      }
    }
    if (infinite) continue;
    columns.push_back(&q);
    costs.push_back(std::move(f));
  }

  ExactSolveReport report;
  if (columns.empty()) {
    report.infinite = true;
    return report;
  }

  lp::RationalProgram prog;
  prog.sense = lp::Sense::minimize;
  prog.A = lp::ColMatrix<Rational>(l, static_cast<int>(columns.size()));
  prog.b.resize(static_cast<std::size_t>(l));
  prog.c = costs;
  for (int i = 0; i < l; ++i)
    prog.b[static_cast<std::size_t>(i)] =
        Rational(num_marginals) * marginal[static_cast<std::size_t>(i)];
  for (int j = 0; j < static_cast<int>(columns.size()); ++j) {
    const auto& rho = columns[static_cast<std::size_t>(j)]->occupations();
    for (int i = 0; i < l; ++i)
      prog.A.at(i, j) = Rational(rho[static_cast<std::size_t>(i)]);
  }

  const lp::RationalSolution sol = lp::solve_exact(prog);
  if (sol.status == lp::SolveStatus::infeasible) {
    if (columns.size() < catalog.size()) {
      report.infinite = true;
      return report;
    }
    throw NumericalError(
        "solve_sae_exact: catalog LP infeasible for a valid marginal");
  }
  if (sol.status != lp::SolveStatus::optimal)
    throw NumericalError("solve_sae_exact: LP ended in unexpected state");

  report.cost = sol.objective;
  std::vector<int> support_cols;
  for (int j = 0; j < static_cast<int>(columns.size()); ++j) {
    if (sol.x[static_cast<std::size_t>(j)] > 0) {
      support_cols.push_back(j);
      report.support.push_back({sol.x[static_cast<std::size_t>(j)],
                                *columns[static_cast<std::size_t>(j)]});
    }
  }
  report.uniqueness_margin = lp::support_margin_exact(prog, support_cols);
  report.unique = report.uniqueness_margin > 0;
  return report;
}

}  // namespace mmot
