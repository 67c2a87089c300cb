#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mmot/marginal.hpp"

namespace mmot {

/// Default cap on materialized catalogs; large enough for every workload
/// in this repo, small enough to fail fast on accidental blowups.
inline constexpr std::uint64_t kDefaultEnumerationLimit = 10'000'000;

/// Hard ceiling demanded by the catalog indexing contract.
inline constexpr std::uint64_t kEnumerationHardLimit = (1ull << 32);

/// 1/N-quantized one-point measure, stored as the occupation vector
/// rho in Z_{>=0}^ell with sum(rho) = N; represents the marginal rho/N.
class QuantizedMeasure {
 public:
  QuantizedMeasure(int num_marginals, std::vector<int> occupations);

  int num_marginals() const { return num_marginals_; }
  int size() const { return static_cast<int>(rho_.size()); }
  const std::vector<int>& occupations() const { return rho_; }
  int occupation(int site) const { return rho_[static_cast<std::size_t>(site)]; }

  Marginal marginal() const;

  bool operator==(const QuantizedMeasure&) const = default;
  /// Lexicographic order on occupation vectors (ties broken by N).
  bool operator<(const QuantizedMeasure& other) const;

 private:
  int num_marginals_;
  std::vector<int> rho_;
};

/// Number of occupation vectors with sum N on ell sites,
/// binom(N + ell - 1, ell - 1); saturates at kCountOverflow.
std::uint64_t quantized_count(int num_sites, int num_marginals);

/// All occupation vectors with sum N, in lexicographically decreasing
/// order. The order is part of the public contract: catalog column j is
/// reproducible across runs. Throws CapacityError past `limit`.
std::vector<QuantizedMeasure> enumerate_quantized(
    int num_sites, int num_marginals,
    std::uint64_t limit = kDefaultEnumerationLimit);

/// Streaming form of the same enumeration (same order) for callers that
/// must not materialize the catalog; fn receives the occupation vector.
void for_each_occupation(int num_sites, int num_marginals,
                         const std::function<void(std::span<const int>)>& fn);

}  // namespace mmot
