#include "mmot/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mmot/combinatorics.hpp"
#include "mmot/errors.hpp"
#include "mmot/multi_index.hpp"
#include "mmot/simplex.hpp"

namespace mmot {

PairMeasure phi_n(const Marginal& lambda, int num_marginals) {
  if (num_marginals < 2)
    throw ValidationError("phi_n needs N >= 2");
  const int l = lambda.size();
  const double ratio = static_cast<double>(num_marginals) / (num_marginals - 1);
  const double correction = 1.0 / (num_marginals - 1);
  std::vector<double> upper;
  upper.reserve(static_cast<std::size_t>(l) * (static_cast<std::size_t>(l) + 1) / 2);
  for (int i = 0; i < l; ++i) {
    for (int j = i; j < l; ++j) {
      double v = ratio * lambda[i] * lambda[j];
      if (i == j) v -= correction * lambda[i];
      upper.push_back(v);
    }
  }
  return PairMeasure::from_upper_triangle(l, upper, /*allow_signed=*/true);
}

SymmetricPlan psi_n(const QuantizedMeasure& q) {
  return SymmetricPlan::dirac(q.num_marginals(), q.size(),
                              index_from_occupations(q.occupations()));
}

double wasserstein_discrete(const PairMeasure& mu) {
  double s = 0.0;
  const int l = mu.size();
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j)
      if (i != j) s += mu.at(i, j);
  return s;
}

double gangbo_swiech_cost(const SymmetricPlan& plan) {
  if (plan.num_marginals() < 2)
    throw ValidationError("Gangbo-Swiech cost needs N >= 2");
  const double pairs =
      0.5 * plan.num_marginals() * (plan.num_marginals() - 1.0);
  return pairs * wasserstein_discrete(plan.marginal_pair());
}

ExtremePointCatalog::ExtremePointCatalog(int num_sites, int num_marginals,
                                         std::uint64_t limit)
    : num_sites_(num_sites), num_marginals_(num_marginals),
      points_(enumerate_quantized(num_sites, num_marginals, limit)) {}

const PairMeasure& ExtremePointCatalog::phi(std::size_t i) const {
  std::call_once(phis_once_, [this] {
    phis_.reserve(points_.size());
    for (const QuantizedMeasure& q : points_)
      phis_.push_back(phi_n(q.marginal(), num_marginals_));
  });
  return phis_[i];
}

RepresentabilityCertificate check_representable(const PairMeasure& mu,
                                                int num_marginals, double tol,
                                                std::uint64_t enumeration_limit) {
  if (num_marginals < 2)
    throw ValidationError("representability needs N >= 2");
  if (!mu.nonnegative(0.0))
    throw ValidationError("representability test expects a probability measure");
  const int l = mu.size();
  const ExtremePointCatalog catalog(l, num_marginals, enumeration_limit);
  const int n = static_cast<int>(catalog.size());
  const int m = l * (l + 1) / 2;

  lp::LinearProgram prog;
  prog.sense = lp::Sense::minimize;
  prog.A = lp::ColMatrix<double>(m, n);
  prog.b.resize(static_cast<std::size_t>(m));
  prog.c.assign(static_cast<std::size_t>(n), 0.0);
  {
    int r = 0;
    for (int i = 0; i < l; ++i)
      for (int j = i; j < l; ++j) {
        prog.b[static_cast<std::size_t>(r)] = mu.at(i, j);
        for (int col = 0; col < n; ++col)
          prog.A.at(r, col) = catalog.phi(static_cast<std::size_t>(col)).at(i, j);
        ++r;
      }
  }

  const lp::LPSolution sol = lp::solve(prog);

  RepresentabilityCertificate cert;
  if (sol.status == lp::SolveStatus::optimal) {
    cert.verdict = RepresentabilityCertificate::Verdict::representable;
    std::vector<SAEState::Site> sites;
    for (int col = 0; col < n; ++col) {
      const double a = sol.x[static_cast<std::size_t>(col)];
      if (a > 1e-10)
        sites.push_back({a, catalog.point(static_cast<std::size_t>(col))});
    }
    SAEState witness = SAEState::from_lp_weights(num_marginals, l, std::move(sites));

    // Reconstruction residual, reported and bounded by tol.
    std::vector<double> acc(static_cast<std::size_t>(l) * l, 0.0);
    for (const auto& site : witness.support()) {
      const PairMeasure img = phi_n(site.distribution.marginal(), num_marginals);
      for (std::size_t k = 0; k < acc.size(); ++k)
        acc[k] += site.weight * img.data()[k];
    }
    double residual = 0.0;
    for (std::size_t k = 0; k < acc.size(); ++k)
      residual = std::max(residual, std::abs(acc[k] - mu.data()[k]));
    if (residual > tol)
      throw NumericalError(
          "representability witness residual " + std::to_string(residual) +
          " exceeds tolerance " + std::to_string(tol));
    cert.witness = std::move(witness);
    cert.witness_residual = residual;
    return cert;
  }
  if (sol.status != lp::SolveStatus::infeasible)
    throw NumericalError("representability LP ended in unexpected state");

  // Phase-one dual separates mu from the catalog's convex hull. Rescale
  // the upper-triangle row duals into a symmetric matrix functional.
  cert.verdict = RepresentabilityCertificate::Verdict::not_representable;
  std::vector<double> g(static_cast<std::size_t>(l) * l, 0.0);
  {
    int r = 0;
    for (int i = 0; i < l; ++i)
      for (int j = i; j < l; ++j) {
        const double y = sol.farkas[static_cast<std::size_t>(r)];
        if (i == j) {
          g[static_cast<std::size_t>(i) * l + i] = y;
        } else {
          g[static_cast<std::size_t>(i) * l + j] = 0.5 * y;
          g[static_cast<std::size_t>(j) * l + i] = 0.5 * y;
        }
        ++r;
      }
  }
  double norm = 0.0;
  for (double v : g) norm = std::max(norm, std::abs(v));
  if (!(norm > 0.0))
    throw NumericalError("representability: degenerate separating functional");
  for (double& v : g) v /= norm;

  const auto functional = [&](const PairMeasure& p) {
    double s = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) s += g[k] * p.data()[k];
    return s;
  };
  const double on_mu = functional(mu);
  double best_catalog = -std::numeric_limits<double>::infinity();
  for (std::size_t col = 0; col < catalog.size(); ++col)
    best_catalog = std::max(best_catalog, functional(catalog.phi(col)));
  cert.margin = on_mu - best_catalog;
  if (!(cert.margin > 0.0))
    throw NumericalError(
        "representability: separating functional margin not positive (" +
        std::to_string(cert.margin) + ")");
  cert.separating = std::move(g);
  return cert;
}

}  // namespace mmot
