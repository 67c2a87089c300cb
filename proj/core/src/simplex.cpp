#include "mmot/simplex.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mmot/detail/margin_aux.hpp"
#include "mmot/detail/simplex_engine.hpp"
#include "mmot/errors.hpp"
#include "mmot/log.hpp"

namespace mmot::lp {

void LinearProgram::validate() const {
  if (A.rows < 1 || A.cols < 1)
    throw ValidationError("linear program needs m >= 1 and n >= 1");
  if (static_cast<int>(b.size()) != A.rows)
    throw ValidationError("linear program: b has wrong length");
  if (static_cast<int>(c.size()) != A.cols)
    throw ValidationError("linear program: c has wrong length");
  for (double v : A.data)
    if (!std::isfinite(v))
      throw ValidationError("linear program: A must be finite");
  for (double v : b)
    if (!std::isfinite(v))
      throw ValidationError("linear program: b must be finite");
  for (double v : c)
    if (!std::isfinite(v))
      throw ValidationError("linear program: c must be finite");
}

namespace {

void check_optimal_invariants(const LinearProgram& lp, const LPSolution& sol) {
  const int m = lp.rows();
  const int n = lp.cols();
  double binf = 0.0;
  for (double v : lp.b) binf = std::max(binf, std::abs(v));
  const double residual_tol = 1e-8 * (1.0 + binf);

  int positive = 0;
  for (int j = 0; j < n; ++j) {
    const double xj = sol.x[static_cast<std::size_t>(j)];
    if (xj < -1e-10)
      throw NumericalError("simplex: optimal x has entry " + std::to_string(xj) +
                           " below -1e-10");
    if (xj > 1e-10) ++positive;
  }
  if (positive > m)
    throw NumericalError("simplex: optimal solution is not basic (" +
                         std::to_string(positive) + " positive entries on " +
                         std::to_string(m) + " rows)");

  for (int i = 0; i < m; ++i) {
    double row = -lp.b[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j)
      row += lp.A.at(i, j) * sol.x[static_cast<std::size_t>(j)];
    if (std::abs(row) > residual_tol)
      throw NumericalError("simplex: feasibility residual " +
                           std::to_string(std::abs(row)) + " exceeds " +
                           std::to_string(residual_tol));
  }

  const double slack_tol = 1e-7 * (1.0 + std::abs(sol.objective));
  for (int j = 0; j < n; ++j) {
    const double cs = sol.x[static_cast<std::size_t>(j)] *
                      sol.reduced_costs[static_cast<std::size_t>(j)];
    if (std::abs(cs) > slack_tol)
      throw NumericalError("simplex: complementary slackness violated");
  }
}

}  // namespace

LPSolution solve(const LinearProgram& lp, const SimplexOptions& options) {
  lp.validate();

  const bool maximize = lp.sense == Sense::maximize;
  std::vector<double> c = lp.c;
  if (maximize)
    for (double& v : c) v = -v;

  detail::EngineOptions<double> eopt;
  eopt.rule = options.rule;
  eopt.refactor_every = options.refactor_every;
  eopt.dantzig_degenerate_fallback = options.dantzig_degenerate_fallback;
  eopt.tol.reduced = options.tol_reduced;
  eopt.tol.pivot = options.tol_pivot;
  eopt.tol.feasibility = options.tol_feasibility;
  eopt.tol.ratio_tie = 1e-12;
  eopt.tol.condition_limit = options.condition_limit;
  if (log_level() >= LogLevel::debug)
    eopt.trace = [](const std::string& line) {
      log_line(LogLevel::debug, line);
    };

  detail::SimplexEngine<double> engine(lp.A, lp.b, std::move(c), eopt);
  detail::EngineResult<double> er = engine.run();

  LPSolution sol;
  sol.status = er.status;
  sol.stats = er.stats;
  if (er.status == SolveStatus::infeasible) {
    sol.farkas = std::move(er.farkas);
    return sol;
  }
  if (er.status == SolveStatus::unbounded) return sol;

  sol.x = std::move(er.x);
  sol.basis = std::move(er.basis);
  sol.objective = maximize ? -er.objective : er.objective;
  sol.duals = std::move(er.duals);
  sol.reduced_costs = std::move(er.reduced_costs);
  if (maximize) {
    // Engine solved min(-c); report duals in the original sense so that
    // reduced costs are c_j - y'A_j <= 0 for nonbasic columns.
    for (double& v : sol.duals) v = -v;
    for (double& v : sol.reduced_costs) v = -v;
  }

  log_debug("simplex: status optimal, objective ", sol.objective, ", pivots ",
            sol.stats.pivots, " (", sol.stats.degenerate_pivots,
            " degenerate), refactorizations ", sol.stats.refactorizations);

  if (options.check_solution) check_optimal_invariants(lp, sol);
  return sol;
}

double basis_margin(const LinearProgram& lp, const LPSolution& sol) {
  if (sol.status != SolveStatus::optimal)
    throw ValidationError("basis_margin needs an optimal solution");
  double margin = std::numeric_limits<double>::infinity();
  std::vector<char> basic(static_cast<std::size_t>(lp.cols()), 0);
  for (int j : sol.basis)
    if (j >= 0 && j < lp.cols()) basic[static_cast<std::size_t>(j)] = 1;
  for (int j = 0; j < lp.cols(); ++j) {
    if (basic[static_cast<std::size_t>(j)]) continue;
    const double rc = sol.reduced_costs[static_cast<std::size_t>(j)];
    margin = std::min(margin, lp.sense == Sense::minimize ? rc : -rc);
  }
  return margin;
}

double support_margin(const LinearProgram& lp, std::span<const int> support,
                      double cap) {
  lp.validate();
  if (support.empty())
    throw ValidationError("support_margin needs a nonempty support");
  std::vector<char> in_support(static_cast<std::size_t>(lp.cols()), 0);
  for (int j : support) {
    if (j < 0 || j >= lp.cols())
      throw ValidationError("support_margin: column index out of range");
    in_support[static_cast<std::size_t>(j)] = 1;
  }
  std::vector<double> c_min = lp.c;
  if (lp.sense == Sense::maximize)
    for (double& v : c_min) v = -v;

  const detail::MarginAux<double> aux =
      detail::build_margin_aux(lp.A, c_min, in_support, cap);
  LinearProgram prog;
  prog.sense = Sense::minimize;
  prog.A = aux.A;
  prog.b = aux.b;
  prog.c = aux.c;
  const LPSolution sol = solve(prog);
  if (sol.status != SolveStatus::optimal)
    throw NumericalError("support_margin: certificate LP failed (" +
                         std::string(sol.status == SolveStatus::infeasible
                                         ? "infeasible"
                                         : "unbounded") +
                         "); the support is likely not optimal");
  return sol.x[static_cast<std::size_t>(aux.t_column)];
}

}  // namespace mmot::lp
