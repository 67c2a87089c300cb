#include "mmot/monge.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mmot/errors.hpp"
#include "mmot/multi_index.hpp"

namespace mmot {

namespace {
bool is_permutation(const std::vector<int>& image, int l) {
  if (image.size() != static_cast<std::size_t>(l)) return false;
  std::vector<char> seen(static_cast<std::size_t>(l), 0);
  for (int v : image) {
    if (v < 0 || v >= l || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = 1;
  }
  return true;
}
}  // namespace

MongeState::MongeState(int num_sites, std::vector<std::vector<int>> perms)
    : permutations(std::move(perms)), num_sites_(num_sites) {
  if (num_sites_ < 1) throw ValidationError("Monge state needs ell >= 1");
  if (permutations.empty())
    throw ValidationError("Monge state needs at least one permutation");
  for (const auto& p : permutations)
    if (!is_permutation(p, num_sites_))
      throw ValidationError("Monge state maps must be permutations");
}

SymmetricPlan MongeState::expand() const {
  const int n = num_marginals();
  SymmetricPlan::EntryMap entries;
  std::vector<int> tuple(static_cast<std::size_t>(n));
  for (int nu = 0; nu < num_sites_; ++nu) {
    for (int k = 0; k < n; ++k)
      tuple[static_cast<std::size_t>(k)] =
          permutations[static_cast<std::size_t>(k)][static_cast<std::size_t>(nu)];
    entries[sorted_index(tuple)] += 1.0 / num_sites_;
  }
  return SymmetricPlan::renormalized(n, num_sites_, std::move(entries), 1e-9);
}

QuantizedDoublyStochastic::QuantizedDoublyStochastic(
    int num_marginals, std::vector<std::vector<int>> counts)
    : num_marginals_(num_marginals), counts_(std::move(counts)) {
  if (num_marginals_ < 1)
    throw ValidationError("quantized doubly stochastic matrix needs N >= 1");
  const int l = static_cast<int>(counts_.size());
  if (l < 1) throw ValidationError("quantized doubly stochastic matrix is empty");
  std::vector<int> col_sums(static_cast<std::size_t>(l), 0);
  for (const auto& row : counts_) {
    if (row.size() != static_cast<std::size_t>(l))
      throw ValidationError("quantized doubly stochastic matrix must be square");
    int row_sum = 0;
    for (int j = 0; j < l; ++j) {
      const int v = row[static_cast<std::size_t>(j)];
      if (v < 0)
        throw ValidationError("quantized doubly stochastic entries must be >= 0");
      row_sum += v;
      col_sums[static_cast<std::size_t>(j)] += v;
    }
    if (row_sum != num_marginals_)
      throw ValidationError("quantized doubly stochastic row sums must equal N");
  }
  for (int s : col_sums)
    if (s != num_marginals_)
      throw ValidationError("quantized doubly stochastic column sums must equal N");
}

QuantizedDoublyStochastic QuantizedDoublyStochastic::from_real(
    int num_marginals, const std::vector<std::vector<double>>& matrix) {
  std::vector<std::vector<int>> counts(matrix.size());
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    counts[i].resize(matrix[i].size());
    for (std::size_t j = 0; j < matrix[i].size(); ++j) {
      const double scaled = matrix[i][j] * num_marginals;
      const double rounded = std::round(scaled);
      if (std::abs(scaled - rounded) > 1e-12 * num_marginals)
        throw ValidationError(
            "matrix entry is not a multiple of 1/N within tolerance");
      counts[i][j] = static_cast<int>(rounded);
    }
  }
  return QuantizedDoublyStochastic(num_marginals, std::move(counts));
}

MatchingResult perfect_matching(const std::vector<std::vector<bool>>& adjacency) {
  const int l = static_cast<int>(adjacency.size());
  if (l < 1) throw ValidationError("matching needs a nonempty matrix");
  for (const auto& row : adjacency)
    if (row.size() != static_cast<std::size_t>(l))
      throw ValidationError("matching needs a square matrix");

  std::vector<int> match_left(static_cast<std::size_t>(l), -1);
  std::vector<int> match_right(static_cast<std::size_t>(l), -1);

  // DFS augmentation. Each vertex first claims the smallest free column,
  // then tries to displace along matched columns in increasing order; a
  // full adjacency matrix therefore yields the identity matching.
  std::vector<char> visited;
  auto augment = [&](auto&& self, int u) -> bool {
    for (int v = 0; v < l; ++v) {
      if (!adjacency[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] ||
          visited[static_cast<std::size_t>(v)] ||
          match_right[static_cast<std::size_t>(v)] >= 0)
        continue;
      visited[static_cast<std::size_t>(v)] = 1;
      match_left[static_cast<std::size_t>(u)] = v;
      match_right[static_cast<std::size_t>(v)] = u;
      return true;
    }
    for (int v = 0; v < l; ++v) {
      if (!adjacency[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] ||
          visited[static_cast<std::size_t>(v)])
        continue;
      visited[static_cast<std::size_t>(v)] = 1;
      if (self(self, match_right[static_cast<std::size_t>(v)])) {
        match_left[static_cast<std::size_t>(u)] = v;
        match_right[static_cast<std::size_t>(v)] = u;
        return true;
      }
    }
    return false;
  };

  for (int u = 0; u < l; ++u) {
    visited.assign(static_cast<std::size_t>(l), 0);
    if (augment(augment, u)) continue;

    // Hall witness: left vertices reachable from u by alternating paths.
    MatchingResult r;
    r.verdict = MatchingResult::Verdict::deficient;
    for (int w = 0; w <= u; ++w) {
      if (w == u) {
        r.deficient_set.push_back(w);
        continue;
      }
      // w belongs to the witness iff it is matched to a visited column.
      const int mw = match_left[static_cast<std::size_t>(w)];
      if (mw >= 0 && visited[static_cast<std::size_t>(mw)])
        r.deficient_set.push_back(w);
    }
    return r;
  }

  MatchingResult r;
  r.verdict = MatchingResult::Verdict::matched;
  r.match = std::move(match_left);
  return r;
}

std::vector<std::vector<int>> birkhoff_quantized_decompose(
    const QuantizedDoublyStochastic& matrix) {
  const int l = matrix.size();
  const int n = matrix.num_marginals();
  std::vector<std::vector<int>> remainder = matrix.counts();
  std::vector<std::vector<int>> perms;
  perms.reserve(static_cast<std::size_t>(n));

  for (int step = 0; step < n; ++step) {
    std::vector<std::vector<bool>> adjacency(
        static_cast<std::size_t>(l), std::vector<bool>(static_cast<std::size_t>(l)));
    for (int i = 0; i < l; ++i)
      for (int j = 0; j < l; ++j)
        adjacency[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            remainder[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] > 0;

    // The positive support of a doubly stochastic matrix always satisfies
    // Hall's condition, so a deficiency can only mean invalid input.
    const MatchingResult match = perfect_matching(adjacency);
    if (!match.matched())
      throw ValidationError(
          "Birkhoff decomposition hit a matching deficiency at step " +
          std::to_string(step + 1) +
          "; the input is not a quantized doubly stochastic matrix");

    // The matching pairs row i with column match[i]; the permutation maps
    // column nu to row tau(nu), matching the column-of-value-distributions
    // convention.
    std::vector<int> tau(static_cast<std::size_t>(l));
    for (int i = 0; i < l; ++i)
      tau[static_cast<std::size_t>(match.match[static_cast<std::size_t>(i)])] = i;
    for (int nu = 0; nu < l; ++nu)
      remainder[static_cast<std::size_t>(tau[static_cast<std::size_t>(nu)])]
               [static_cast<std::size_t>(nu)] -= 1;
    perms.push_back(std::move(tau));

    // Inductive invariant: the remainder rescaled by N/(N-step-1) is again
    // doubly stochastic, i.e. all row and column sums equal N-step-1.
    const int expected = n - step - 1;
    std::vector<int> col_sums(static_cast<std::size_t>(l), 0);
    for (int i = 0; i < l; ++i) {
      int row_sum = 0;
      for (int j = 0; j < l; ++j) {
        const int v =
            remainder[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (v < 0)
          throw ValidationError(
              "Birkhoff decomposition produced a negative remainder; the "
              "input is not a quantized doubly stochastic matrix");
        row_sum += v;
        col_sums[static_cast<std::size_t>(j)] += v;
      }
      if (row_sum != expected)
        throw NumericalError("Birkhoff remainder row sum invariant violated");
    }
    for (int s : col_sums)
      if (s != expected)
        throw NumericalError("Birkhoff remainder column sum invariant violated");
  }
  return perms;
}

SAEState monge_to_sae(const MongeState& monge) {
  const int l = monge.num_sites();
  const int n = monge.num_marginals();
  std::vector<SAEState::Site> sites;
  sites.reserve(static_cast<std::size_t>(l));
  for (int nu = 0; nu < l; ++nu) {
    std::vector<int> counts(static_cast<std::size_t>(l), 0);
    for (int k = 0; k < n; ++k)
      ++counts[static_cast<std::size_t>(
          monge.permutations[static_cast<std::size_t>(k)]
                            [static_cast<std::size_t>(nu)])];
    sites.push_back({1.0 / l, QuantizedMeasure(n, std::move(counts))});
  }
  SAEState state(n, l, std::move(sites));
  state.attach_maps(monge.permutations);
  return state;
}

MongeState sae_to_monge(const SAEState& state) {
  const int l = state.num_sites();
  const int n = state.num_marginals();
  if (state.support_size() != static_cast<std::size_t>(l))
    throw ValidationError(
        "sae_to_monge requires exactly ell support sites with weight 1/ell "
        "(got " +
        std::to_string(state.support_size()) + " of " + std::to_string(l) + ")");
  for (const auto& site : state.support())
    if (std::abs(site.weight - 1.0 / l) > 1e-10)
      throw ValidationError(
          "sae_to_monge requires uniform site weights 1/ell; weight " +
          std::to_string(site.weight) + " differs");

  // Columns are the value distributions; the uniform-marginal constraint
  // makes the matrix doubly stochastic in integer counts.
  std::vector<std::vector<int>> counts(
      static_cast<std::size_t>(l), std::vector<int>(static_cast<std::size_t>(l), 0));
  for (int nu = 0; nu < l; ++nu) {
    const auto& rho = state.support()[static_cast<std::size_t>(nu)]
                          .distribution.occupations();
    for (int i = 0; i < l; ++i)
      counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(nu)] =
          rho[static_cast<std::size_t>(i)];
  }
  QuantizedDoublyStochastic matrix = [&] {
    try {
      return QuantizedDoublyStochastic(n, std::move(counts));
    } catch (const ValidationError&) {
      throw ValidationError(
          "sae_to_monge requires the uniform average marginal: the value "
          "distribution matrix is not doubly stochastic");
    }
  }();
  return MongeState(l, birkhoff_quantized_decompose(matrix));
}

}  // namespace mmot
