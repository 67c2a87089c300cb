// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Each criterion pins its tolerances in code; failures carry the measured
// numbers so a red line is actionable on its own.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mmot/exact.hpp"
#include "mmot/extremal.hpp"
#include "mmot/monge.hpp"
#include "mmot/multi_index.hpp"
#include "mmot/solver.hpp"

using namespace mmot;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int index, const std::string& name, bool pass,
            const std::string& detail, double seconds) {
  std::printf("[%s] %2d. %s — %s (%.2f s)\n", pass ? "PASS" : "FAIL", index,
              name.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

void criterion(int index, const std::string& name,
               const std::function<std::pair<bool, std::string>()>& body) {
  const auto start = Clock::now();
  bool pass = false;
  std::string detail;
  try {
    auto [ok, msg] = body();
    pass = ok;
    detail = std::move(msg);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double seconds =
      std::chrono::duration<double>(Clock::now() - start).count();
  report(index, name, pass, detail, seconds);
}

CostSpec spring_instance() {
  return CostSpec(spring_pairwise(PointCloud({{1.0}, {2.0}, {3.0}}), 0.75));
}

std::uint64_t pascal_binomial(int n, int k) {
  std::vector<std::uint64_t> row{1};
  for (int i = 1; i <= n; ++i) {
    std::vector<std::uint64_t> next(static_cast<std::size_t>(i) + 1, 1);
    for (int j = 1; j < i; ++j)
      next[static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(j - 1)] +
                                          row[static_cast<std::size_t>(j)];
    row = std::move(next);
  }
  return row[static_cast<std::size_t>(k)];
}

PairwiseCost random_symmetric_cost(int l, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> entry(0.0, 1.0);
  std::vector<double> m(static_cast<std::size_t>(l) * l);
  for (int i = 0; i < l; ++i)
    for (int j = i; j < l; ++j) {
      const double v = entry(rng);
      m[static_cast<std::size_t>(i) * l + j] = v;
      m[static_cast<std::size_t>(j) * l + i] = v;
    }
  return PairwiseCost::from_matrix(l, std::move(m));
}

Marginal random_quantized_marginal(int l, int n, std::mt19937_64& rng) {
  std::vector<int> rho(static_cast<std::size_t>(l), 0);
  for (int k = 0; k < n; ++k) ++rho[static_cast<std::size_t>(rng() % l)];
  return QuantizedMeasure(n, rho).marginal();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

int main() {
  std::size_t sparsity_checked = 0;
  std::size_t sparsity_max_support = 0;
  int sparsity_max_sites = 0;

  // 1. Spring-chain reproduction with exact-rational uniqueness.
  criterion(1, "three-site spring chain: cost 11/16, two-point support, exact uniqueness", [&] {
    const auto t0 = Clock::now();
    const SolveReport r = solve_sae(spring_instance(), Marginal::uniform(3), 3);
    const double wall = std::chrono::duration<double>(Clock::now() - t0).count();
    if (r.outcome != SolveOutcome::optimal)
      return std::pair{false, std::string("solve not optimal")};
    if (std::abs(r.cost - 0.6875) > 1e-9)
      return std::pair{false, "cost " + fmt(r.cost) + " != 11/16 within 1e-9"};
    if (r.state->support_size() != 2)
      return std::pair{false, std::string("support size != 2")};
    const auto& s0 = r.state->support()[0];
    const auto& s1 = r.state->support()[1];
    if (s0.distribution.occupations() != std::vector<int>{2, 1, 0} ||
        s1.distribution.occupations() != std::vector<int>{0, 1, 2})
      return std::pair{false, std::string("support is not {(2,1,0),(0,1,2)}")};
    if (std::abs(s0.weight - 0.5) > 1e-9 || std::abs(s1.weight - 0.5) > 1e-9)
      return std::pair{false, std::string("weights differ from 1/2")};
    if (std::abs(r.plan->weight(std::vector<int>{0, 0, 1}) - 0.5) > 1e-9 ||
        std::abs(r.plan->weight(std::vector<int>{1, 2, 2}) - 0.5) > 1e-9)
      return std::pair{false, std::string("expanded plan differs")};
    sparsity_checked += 1;
    sparsity_max_support =
        std::max(sparsity_max_support, r.state->support_size());
    sparsity_max_sites = std::max(sparsity_max_sites, 3);

    const ExactSolveReport exact = solve_sae_exact(
        std::get<PairwiseCost>(spring_instance()), rational_uniform(3), 3);
    if (exact.infinite || exact.cost != Rational(11, 16))
      return std::pair{false, std::string("exact cost != 11/16")};
    if (!exact.unique || !(exact.uniqueness_margin > 0))
      return std::pair{false, std::string("exact uniqueness not certified")};
    if (wall >= 1.0)
      return std::pair{false, "took " + fmt(wall) + " s (>= 1 s)"};
    return std::pair{true, "cost " + fmt(r.cost) + ", support {(2,1,0),(0,1,2)}, exact margin " +
                               exact.uniqueness_margin.str() + ", " +
                               fmt(wall) + " s"};
  });

  // 2. The same instance is not attained by Monge states.
  criterion(2, "Monge brute force exceeds 11/16 on the spring chain", [&] {
    const auto t0 = Clock::now();
    const MongeReport monge = solve_monge_bruteforce(spring_instance(), 3);
    const double wall = std::chrono::duration<double>(Clock::now() - t0).count();
    if (monge.outcome != SolveOutcome::optimal)
      return std::pair{false, std::string("brute force failed")};
    if (!(monge.cost > 0.6875 + 1e-9))
      return std::pair{false, "best Monge cost " + fmt(monge.cost) +
                                  " not above 11/16 + 1e-9"};
    if (std::abs(monge.cost - 49.0 / 48) > 1e-12)
      return std::pair{false, "best Monge cost " + fmt(monge.cost) +
                                  " differs from the enumerated 49/48"};
    if (wall >= 1.0)
      return std::pair{false, "took " + fmt(wall) + " s (>= 1 s)"};
    return std::pair{true, "gap " + fmt(monge.cost - 0.6875) + " over " +
                               std::to_string(monge.states_visited) +
                               " states, " + fmt(wall) + " s"};
  });

  // 3. Extreme-point counts.
  criterion(3, "catalog counts match binom(N+l-1, l-1)", [&] {
    if (enumerate_quantized(3, 10).size() != 66)
      return std::pair{false, std::string("catalog(3,10) != 66")};
    for (int l = 1; l <= 6; ++l)
      for (int n = 1; n <= 12; ++n)
        if (enumerate_quantized(l, n).size() !=
            pascal_binomial(n + l - 1, l - 1))
          return std::pair{false, "count mismatch at l=" + std::to_string(l) +
                                      ", N=" + std::to_string(n)};
    return std::pair{true, std::string("catalog(3,10) = 66; all l <= 6, N <= 12 match")};
  });

  // 4. Oracle equivalence on 100 seeded random instances.
  criterion(4, "extremal-mixture solve matches the unreduced oracle (100 seeds)", [&] {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20240901);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const int l = 2 + static_cast<int>(rng() % 3);
      const int n = 2 + static_cast<int>(rng() % 4);
      const PairwiseCost cost = random_symmetric_cost(l, rng);
      const Marginal m = random_quantized_marginal(l, n, rng);
      const SolveReport sae = solve_sae(CostSpec(cost), m, n);
      const OracleReport oracle = solve_oracle_full(CostSpec(cost), m, n);
      if (sae.outcome != SolveOutcome::optimal ||
          oracle.outcome != SolveOutcome::optimal)
        return std::pair{false, "trial " + std::to_string(trial) + " failed"};
      const double diff = std::abs(sae.cost - oracle.cost);
      const double bound = 1e-7 * (1.0 + std::abs(sae.cost));
      worst = std::max(worst, diff / bound);
      if (diff > bound)
        return std::pair{false, "trial " + std::to_string(trial) + ": |" +
                                    fmt(sae.cost) + " - " + fmt(oracle.cost) +
                                    "| > " + fmt(bound)};
      sparsity_checked += 1;
      sparsity_max_support =
          std::max(sparsity_max_support, sae.state->support_size());
      sparsity_max_sites = std::max(sparsity_max_sites, l);
      if (sae.state->support_size() > static_cast<std::size_t>(l))
        return std::pair{false, std::string("sparsity bound violated")};
    }
    const double wall = std::chrono::duration<double>(Clock::now() - t0).count();
    if (wall >= 60.0)
      return std::pair{false, "took " + fmt(wall) + " s (>= 60 s)"};
    return std::pair{true, "100 instances, worst scaled gap " + fmt(worst) +
                               ", " + fmt(wall) + " s"};
  });

  // 5. Commuting square between the pair marginal and the correlated map.
  criterion(5, "pair marginal of psi_N equals phi_N over all catalogs (l<=4, N<=6)", [&] {
    double worst = 0.0;
    for (int l = 1; l <= 4; ++l)
      for (int n = 2; n <= 6; ++n)
        for (const QuantizedMeasure& q : enumerate_quantized(l, n)) {
          const double diff = PairMeasure::max_abs_difference(
              psi_n(q).marginal_pair(), phi_n(q.marginal(), n));
          worst = std::max(worst, diff);
          if (diff > 1e-12)
            return std::pair{false, "entrywise gap " + fmt(diff) + " at l=" +
                                        std::to_string(l) + ", N=" +
                                        std::to_string(n)};
        }
    return std::pair{true, "max entrywise gap " + fmt(worst)};
  });

  // 6. Transport-cost maximality of the correlated states.
  criterion(6, "discrete transport maximizers are the correlated states (l<=4, N<=5)", [&] {
    double worst_value = 0.0, worst_margin = 1e300;
    for (int l = 1; l <= 4; ++l)
      for (int n = 2; n <= 5; ++n)
        for (const QuantizedMeasure& q : enumerate_quantized(l, n)) {
          const Marginal lambda = q.marginal();
          double sq = 0.0;
          for (int i = 0; i < l; ++i) sq += lambda[i] * lambda[i];
          const double expected =
              (static_cast<double>(n) / (n - 1)) * (1.0 - sq);

          const MaximizeReport w = maximize_wasserstein(lambda, n);
          worst_value = std::max(worst_value, std::abs(w.value - expected));
          if (std::abs(w.value - expected) > 1e-9)
            return std::pair{false, "value gap " + fmt(w.value - expected)};
          if (PairMeasure::max_abs_difference(w.optimizer, phi_n(lambda, n)) >
              1e-9)
            return std::pair{false, std::string("optimizer is not phi_N")};
          if (!(w.uniqueness_margin > 1e-9))
            return std::pair{false,
                             "uniqueness margin " + fmt(w.uniqueness_margin)};
          worst_margin = std::min(worst_margin, w.uniqueness_margin);

          const GsMaximizeReport g = maximize_gs(lambda, n);
          const double pairs = 0.5 * n * (n - 1.0);
          if (std::abs(g.value - pairs * expected) > 1e-9)
            return std::pair{false, std::string("gs value mismatch")};
          const SymmetricPlan psi = psi_n(q);
          if (SymmetricPlan::max_abs_difference(g.optimizer, psi) > 1e-9)
            return std::pair{false, std::string("gs optimizer is not psi_N")};
        }
    return std::pair{true, "worst value gap " + fmt(worst_value) +
                               ", smallest margin " + fmt(worst_margin)};
  });

  // 7. Monge roundtrip and exact Birkhoff reconstruction.
  criterion(7, "Monge roundtrip preserves plans; Birkhoff sums reconstruct exactly", [&] {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 100; ++trial) {
      const int l = 2 + static_cast<int>(rng() % 4);
      const int n = 2 + static_cast<int>(rng() % 4);
      std::vector<std::vector<int>> perms;
      for (int k = 0; k < n; ++k) {
        std::vector<int> p(static_cast<std::size_t>(l));
        std::iota(p.begin(), p.end(), 0);
        std::shuffle(p.begin(), p.end(), rng);
        perms.push_back(std::move(p));
      }
      const MongeState original(l, perms);
      const SAEState state = monge_to_sae(original);
      const MongeState back = sae_to_monge(state);
      if (!(back.expand() == original.expand()))
        return std::pair{false, "plan mismatch at trial " + std::to_string(trial)};

      // Integer reconstruction of the column matrix.
      std::vector<std::vector<int>> counts(
          static_cast<std::size_t>(l),
          std::vector<int>(static_cast<std::size_t>(l), 0));
      for (const auto& tau : perms)
        for (int nu = 0; nu < l; ++nu)
          counts[static_cast<std::size_t>(tau[static_cast<std::size_t>(nu)])]
                [static_cast<std::size_t>(nu)] += 1;
      const auto decomposed =
          birkhoff_quantized_decompose(QuantizedDoublyStochastic(n, counts));
      std::vector<std::vector<int>> sum(
          static_cast<std::size_t>(l),
          std::vector<int>(static_cast<std::size_t>(l), 0));
      for (const auto& tau : decomposed)
        for (int nu = 0; nu < l; ++nu)
          sum[static_cast<std::size_t>(tau[static_cast<std::size_t>(nu)])]
             [static_cast<std::size_t>(nu)] += 1;
      if (sum != counts)
        return std::pair{false, std::string("Birkhoff sum identity violated")};
    }
    return std::pair{true, std::string("100 random states, plans identical, sums exact")};
  });

  // 8. Sparsity bound collected across criteria 1 and 4.
  criterion(8, "every extremal-mixture solution used at most ell points", [&] {
    if (sparsity_checked < 101)
      return std::pair{false, std::string("sparsity samples missing")};
    if (sparsity_max_support > static_cast<std::size_t>(sparsity_max_sites))
      return std::pair{false, std::string("support exceeded ell")};
    return std::pair{true, std::to_string(sparsity_checked) +
                               " solves, max support " +
                               std::to_string(sparsity_max_support) +
                               " <= max ell " +
                               std::to_string(sparsity_max_sites)};
  });

  // 9. Concavity of the off-diagonal quadratic.
  criterion(9, "Hessian Rayleigh quotient is -1 on 1000 random tangents", [&] {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double worst = 0.0;
    int tested = 0;
    while (tested < 1000) {
      const int l = 2 + static_cast<int>(rng() % 7);
      std::vector<double> x(static_cast<std::size_t>(l));
      double mean = 0.0;
      for (double& v : x) {
        v = gauss(rng);
        mean += v;
      }
      mean /= l;
      for (double& v : x) v -= mean;
      double sum = 0.0, norm2 = 0.0;
      for (double v : x) {
        sum += v;
        norm2 += v * v;
      }
      if (norm2 < 1e-10) continue;
      double quad = 0.0;
      for (double v : x) quad += v * (sum - v);
      const double rayleigh = quad / norm2;
      worst = std::max(worst, std::abs(rayleigh + 1.0));
      if (std::abs(rayleigh + 1.0) > 1e-10)
        return std::pair{false, "Rayleigh deviation " + fmt(rayleigh + 1.0)};
      ++tested;
    }
    return std::pair{true, "worst deviation " + fmt(worst)};
  });

  // 10. Pairwise cost identity through the pair marginal.
  criterion(10, "N-body pairwise cost equals binom(N,2) * pair-marginal pairing", [&] {
    std::mt19937_64 rng(1010);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const int l = 2 + static_cast<int>(rng() % 3);
      const int n = 2 + static_cast<int>(rng() % 4);
      const PairwiseCost cost = random_symmetric_cost(l, rng);
      SymmetricPlan::EntryMap entries;
      double total = 0.0;
      const int atoms = 1 + static_cast<int>(rng() % 5);
      for (int k = 0; k < atoms; ++k) {
        std::vector<int> idx(static_cast<std::size_t>(n));
        for (int& v : idx) v = static_cast<int>(rng() % l);
        const double w = 1.0 + static_cast<double>(rng() % 99);
        entries[sorted_index(idx)] += w;
        total += w;
      }
      for (auto& [key, w] : entries) w /= total;
      const SymmetricPlan plan =
          SymmetricPlan::renormalized(n, l, std::move(entries), 1e-9);

      double direct = 0.0;
      for (const auto& [key, w] : plan.entries()) {
        double pair_sum = 0.0;
        for (std::size_t p = 0; p < key.size(); ++p)
          for (std::size_t q = p + 1; q < key.size(); ++q)
            pair_sum += cost.at(key[p], key[q]);
        direct += w * pair_sum;
      }
      const PairMeasure m2 = plan.marginal_pair();
      double paired = 0.0;
      for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j) paired += cost.at(i, j) * m2.at(i, j);
      const double via_marginal = 0.5 * n * (n - 1.0) * paired;
      const double gap = std::abs(direct - via_marginal);
      worst = std::max(worst, gap);
      if (gap > 1e-10)
        return std::pair{false, "identity gap " + fmt(gap)};
    }
    return std::pair{true, "worst gap " + fmt(worst)};
  });

  // Scaling smoke test for the headline unknown-count reduction.
  criterion(11, "column generation solves l=5, N=20 (catalog 10626) under 10 s", [&] {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(555);
    const PairwiseCost cost = random_symmetric_cost(5, rng);
    SolveOptions options;
    options.pricing = Pricing::enumerate;
    const SolveReport r =
        solve_colgen(CostSpec(cost), Marginal::uniform(5), 20, options);
    const double wall = std::chrono::duration<double>(Clock::now() - t0).count();
    if (r.outcome != SolveOutcome::optimal || !r.certified_optimal)
      return std::pair{false, std::string("colgen did not certify optimality")};
    if (r.stats.catalog_size != 10626)
      return std::pair{false, std::string("unexpected catalog size")};
    if (wall >= 10.0)
      return std::pair{false, "took " + fmt(wall) + " s (>= 10 s)"};
    const SolveReport direct =
        solve_sae(CostSpec(cost), Marginal::uniform(5), 20);
    if (std::abs(direct.cost - r.cost) > 1e-8 * (1.0 + std::abs(direct.cost)))
      return std::pair{false, std::string("colgen disagrees with the full solve")};
    return std::pair{true, "cost " + fmt(r.cost) + " with " +
                               std::to_string(r.stats.columns_generated) +
                               " of 10626 columns, " + fmt(wall) + " s"};
  });

  if (failures == 0)
    std::printf("acceptance: all criteria passed\n");
  else
    std::printf("acceptance: %d criterion(s) FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
