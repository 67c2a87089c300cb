#pragma once

#include <cstdint>
#include <limits>
#include <span>

#include "mmot/errors.hpp"

namespace mmot {

inline constexpr std::uint64_t kCountOverflow =
    std::numeric_limits<std::uint64_t>::max();

/// binom(n, k) in saturating 64-bit arithmetic; returns kCountOverflow
/// instead of wrapping.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t num = n - k + i;
    // r * num / i is integral at every step; guard the multiply.
    if (r > kCountOverflow / num) return kCountOverflow;
    r = r * num / i;
  }
  return r;
}

/// Falling factorial n * (n-1) * ... * (n-k+1).
inline std::uint64_t falling_factorial(std::uint64_t n, std::uint64_t k) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    const std::uint64_t f = n - i;
    if (f == 0) return 0;
    if (r > kCountOverflow / f) return kCountOverflow;
    r *= f;
  }
  return r;
}

/// Number of distinct arrangements of a multiset with the given
/// multiplicities, N! / prod(rho_i!), saturating.
inline std::uint64_t arrangement_count(std::span<const int> rho) {
  // Build incrementally as prod over elements of binom(seen, rho_i).
  std::uint64_t seen = 0;
  std::uint64_t r = 1;
  for (int m : rho) {
    for (int j = 1; j <= m; ++j) {
      ++seen;
      if (r > kCountOverflow / seen) return kCountOverflow;
      r = r * seen / static_cast<std::uint64_t>(j);
    }
  }
  return r;
}

}  // namespace mmot
