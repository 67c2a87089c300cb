#pragma once

#include <algorithm>
#include <span>
#include <vector>

namespace mmot {

/// Nondecreasing tuple of site indices (0-based), length N. Kept as a
/// plain vector so it can key ordered maps; validity is enforced at the
/// SymmetricPlan boundary.
using MultiIndex = std::vector<int>;

/// Sorted copy of an arbitrary index tuple.
inline MultiIndex sorted_index(std::span<const int> indices) {
  MultiIndex out(indices.begin(), indices.end());
  std::sort(out.begin(), out.end());
  return out;
}

/// Occupation vector of a multi-index on `num_sites` sites.
inline std::vector<int> index_occupations(std::span<const int> index,
                                          int num_sites) {
  std::vector<int> rho(static_cast<std::size_t>(num_sites), 0);
  for (int i : index) ++rho[static_cast<std::size_t>(i)];
  return rho;
}

/// Canonical multi-index of an occupation vector: site i repeated rho_i
/// times, nondecreasing.
inline MultiIndex index_from_occupations(std::span<const int> rho) {
  MultiIndex out;
  for (std::size_t i = 0; i < rho.size(); ++i)
    out.insert(out.end(), static_cast<std::size_t>(rho[i]), static_cast<int>(i));
  return out;
}

/// True when nondecreasing with entries in [0, num_sites).
inline bool is_valid_multi_index(std::span<const int> index, int num_sites) {
  int prev = 0;
  for (int i : index) {
    if (i < prev || i >= num_sites) return false;
    prev = i;
  }
  return !index.empty();
}

}  // namespace mmot
