// mmot: symmetric multi-marginal optimal transport on finite state spaces.
//
// Machine-readable JSON goes to stdout, human-readable summaries to
// stderr, so output composes in pipelines. Exit codes: 0 success, 1 input
// error, 2 solver capacity/infeasible, 3 negative certificate.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mmot/errors.hpp"
#include "mmot/exact.hpp"
#include "mmot/extremal.hpp"
#include "mmot/monge.hpp"
#include "mmot/problem.hpp"
#include "mmot/serialization.hpp"
#include "mmot/solver.hpp"

namespace {

using nlohmann::json;

void emit(const json& out) { std::cout << out.dump(2) << std::endl; }

struct CommonFlags {
  std::optional<std::string> method;
  std::optional<std::string> pricing;
  bool exact = false;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::uint64_t> limit_columns;
  std::optional<std::uint64_t> limit_oracle;
};

mmot::SolveOptions to_options(const mmot::SolverSettings& settings) {
  mmot::SolveOptions opts;
  opts.pricing = settings.pricing;
  opts.threads = settings.threads;
  opts.seed = settings.seed;
  opts.limits = settings.limits;
  return opts;
}

int run_solve(const std::string& path, const CommonFlags& flags) {
  mmot::Problem problem = mmot::load_problem(path);
  if (flags.method) problem.settings.method = *flags.method;
  if (flags.pricing) {
    if (*flags.pricing == "enumerate")
      problem.settings.pricing = mmot::Pricing::enumerate;
    else if (*flags.pricing == "local-search")
      problem.settings.pricing = mmot::Pricing::local_search;
    else
      throw mmot::ValidationError("unknown pricing \"" + *flags.pricing + "\"");
  }
  if (flags.exact) problem.settings.exact = true;
  if (flags.seed) problem.settings.seed = *flags.seed;
  if (flags.threads) problem.settings.threads = *flags.threads;
  if (flags.limit_columns)
    problem.settings.limits.enumeration = *flags.limit_columns;
  if (flags.limit_oracle)
    problem.settings.limits.oracle_atoms = *flags.limit_oracle;

  const mmot::SolveOptions opts = to_options(problem.settings);
  const std::string& method = problem.settings.method;

  json out;
  bool optimal = true;
  if (method == "oracle") {
    const mmot::OracleReport report = mmot::solve_oracle_full(
        problem.cost, problem.marginal, problem.num_marginals, opts);
    optimal = report.outcome == mmot::SolveOutcome::optimal;
    out = mmot::oracle_report_to_json(report);
    std::cerr << "oracle: cost " << report.cost << " over "
              << report.stats.finite_columns << " finite atoms in "
              << report.stats.wall_seconds << " s\n";
  } else if (method == "monge") {
    const mmot::MongeReport report = mmot::solve_monge_bruteforce(
        problem.cost, problem.num_marginals, problem.marginal, opts);
    optimal = report.outcome == mmot::SolveOutcome::optimal;
    out = mmot::monge_report_to_json(report);
    std::cerr << "monge: best cost " << report.cost << " over "
              << report.states_visited << " states in " << report.wall_seconds
              << " s\n";
  } else {
    const mmot::SolveReport report =
        method == "colgen"
            ? mmot::solve_colgen(problem.cost, problem.marginal,
                                 problem.num_marginals, opts)
            : mmot::solve_sae(problem.cost, problem.marginal,
                              problem.num_marginals, opts);
    optimal = report.outcome == mmot::SolveOutcome::optimal;
    out = mmot::solve_report_to_json(report, method);
    std::cerr << method << ": cost " << report.cost << ", support "
              << (report.state ? report.state->support_size() : 0) << ", "
              << report.stats.pivots << " pivots in "
              << report.stats.wall_seconds << " s\n";

    if (problem.settings.exact) {
      const auto* pairwise = std::get_if<mmot::PairwiseCost>(&problem.cost);
      if (pairwise == nullptr)
        throw mmot::ValidationError("exact mode needs a pairwise cost");
      const std::vector<mmot::Rational> marginal =
          problem.uniform_marginal
              ? mmot::rational_uniform(problem.space.size())
              : mmot::rational_from_marginal(problem.marginal);
      const mmot::ExactSolveReport exact = mmot::solve_sae_exact(
          *pairwise, marginal, problem.num_marginals,
          problem.settings.limits.enumeration);
      out["exact"] = mmot::exact_report_to_json(exact);
      if (!exact.infinite)
        std::cerr << "exact: cost " << exact.cost << ", support "
                  << exact.support.size() << ", unique "
                  << (exact.unique ? "yes" : "no") << "\n";
    }
  }
  emit(out);
  return optimal ? 0 : 2;
}

int run_enumerate(int l, int n, bool with_phi, const CommonFlags& flags) {
  const std::uint64_t limit =
      flags.limit_columns.value_or(mmot::kDefaultEnumerationLimit);
  const mmot::ExtremePointCatalog catalog(l, n, limit);
  json entries = json::array();
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    json e{{"rho", catalog.point(i).occupations()}};
    if (with_phi) e["phi"] = mmot::pair_measure_to_json(catalog.phi(i))["matrix"];
    entries.push_back(std::move(e));
  }
  json out{{"l", l}, {"N", n}, {"count", catalog.size()},
           {"entries", std::move(entries)}};
  std::cerr << "catalog for l=" << l << ", N=" << n << ": " << catalog.size()
            << " extreme points\n";
  emit(out);
  return 0;
}

int run_check_representable(const std::string& path, int n, double tol) {
  const mmot::PairMeasure mu =
      mmot::pair_measure_from_json(mmot::load_json(path));
  const mmot::RepresentabilityCertificate cert =
      mmot::check_representable(mu, n, tol);
  emit(mmot::certificate_to_json(cert, mu.size()));
  if (cert.representable()) {
    std::cerr << "representable (witness support "
              << cert.witness->support_size() << ", residual "
              << cert.witness_residual << ")\n";
    return 0;
  }
  std::cerr << "not representable (separating margin " << cert.margin << ")\n";
  return 3;
}

int run_decompose_monge(const std::string& path) {
  const mmot::SAEState state = mmot::sae_from_json(mmot::load_json(path));
  const mmot::MongeState monge = mmot::sae_to_monge(state);
  emit(mmot::monge_to_json(monge));
  std::cerr << "decomposed into " << monge.num_marginals()
            << " permutations\n";
  return 0;
}

int run_max_wasserstein(const std::string& path, int n, bool gs,
                        const CommonFlags& flags) {
  const mmot::Marginal marginal =
      mmot::marginal_from_json(mmot::load_json(path));
  mmot::SolveOptions opts;
  if (flags.threads) opts.threads = *flags.threads;
  if (flags.limit_columns) opts.limits.enumeration = *flags.limit_columns;
  if (gs) {
    const mmot::GsMaximizeReport report =
        mmot::maximize_gs(marginal, n, opts);
    emit(mmot::gs_report_to_json(report));
    std::cerr << "max Gangbo-Swiech cost: " << report.value << "\n";
  } else {
    const mmot::MaximizeReport report =
        mmot::maximize_wasserstein(marginal, n, opts);
    emit(mmot::maximize_report_to_json(report));
    std::cerr << "max Wasserstein cost: " << report.value << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetric multi-marginal optimal transport solver"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string problem_path, measure_path, marginal_path, sae_path;
  int l = 0, n = 0;
  bool with_phi = false, gs = false;
  double tol = 1e-8;
  std::string method, pricing;

  auto* solve = app.add_subcommand("solve", "Solve a problem file");
  solve->add_option("problem", problem_path, "Problem JSON file")->required();
  solve->add_option("--method", method, "sae | colgen | oracle | monge");
  solve->add_option("--pricing", pricing, "enumerate | local-search");
  solve->add_flag("--exact", flags.exact,
                  "Adjudicate the solve in exact rational arithmetic");
  solve->add_option("--seed", [&flags](const CLI::results_t& r) {
    flags.seed = std::stoull(r[0]);
    return true;
  }, "RNG seed for heuristic pricing");
  solve->add_option("--threads", [&flags](const CLI::results_t& r) {
    flags.threads = std::stoi(r[0]);
    return true;
  }, "Column evaluation threads (0 = all cores)");
  solve->add_option("--limit-columns", [&flags](const CLI::results_t& r) {
    flags.limit_columns = std::stoull(r[0]);
    return true;
  }, "Catalog enumeration limit");
  solve->add_option("--limit-oracle", [&flags](const CLI::results_t& r) {
    flags.limit_oracle = std::stoull(r[0]);
    return true;
  }, "Oracle atom limit");

  auto* enumerate =
      app.add_subcommand("enumerate", "List the extreme-point catalog");
  enumerate->add_option("l", l, "Number of sites")->required();
  enumerate->add_option("N", n, "Number of marginals")->required();
  enumerate->add_flag("--with-phi", with_phi,
                      "Include the correlated pair measure of each point");
  enumerate->add_option("--limit-columns", [&flags](const CLI::results_t& r) {
    flags.limit_columns = std::stoull(r[0]);
    return true;
  }, "Catalog enumeration limit");

  auto* check = app.add_subcommand("check-representable",
                                   "Test membership in the representable set");
  check->add_option("measure", measure_path, "Pair measure JSON file")
      ->required();
  check->add_option("N", n, "Number of marginals")->required();
  check->add_option("--tol", tol, "Witness reconstruction tolerance");

  auto* decompose = app.add_subcommand(
      "decompose-monge", "Decompose a uniform-weight SAE state into maps");
  decompose->add_option("state", sae_path, "SAE state JSON file")->required();

  auto* maxw = app.add_subcommand("max-wasserstein",
                                  "Maximize the discrete transport cost");
  maxw->add_option("marginal", marginal_path, "Marginal JSON file")->required();
  maxw->add_option("N", n, "Number of marginals")->required();
  maxw->add_flag("--gs", gs, "Maximize the N-point Gangbo-Swiech cost instead");
  maxw->add_option("--threads", [&flags](const CLI::results_t& r) {
    flags.threads = std::stoi(r[0]);
    return true;
  }, "Threads");
  maxw->add_option("--limit-columns", [&flags](const CLI::results_t& r) {
    flags.limit_columns = std::stoull(r[0]);
    return true;
  }, "Catalog enumeration limit");

  CLI11_PARSE(app, argc, argv);

  if (!method.empty()) flags.method = method;
  if (!pricing.empty()) flags.pricing = pricing;

  try {
    if (solve->parsed()) return run_solve(problem_path, flags);
    if (enumerate->parsed()) return run_enumerate(l, n, with_phi, flags);
    if (check->parsed()) return run_check_representable(measure_path, n, tol);
    if (decompose->parsed()) return run_decompose_monge(sae_path);
    if (maxw->parsed()) return run_max_wasserstein(marginal_path, n, gs, flags);
  } catch (const mmot::ValidationError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const mmot::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 2;
  } catch (const mmot::NumericalError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
