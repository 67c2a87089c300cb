#include "mmot/quantized.hpp"

#include <numeric>
#include <string>

#include "mmot/combinatorics.hpp"
#include "mmot/errors.hpp"

namespace mmot {

QuantizedMeasure::QuantizedMeasure(int num_marginals, std::vector<int> occupations)
    : num_marginals_(num_marginals), rho_(std::move(occupations)) {
  if (num_marginals_ < 1)
    throw ValidationError("quantized measure needs N >= 1");
  if (rho_.empty())
    throw ValidationError("quantized measure needs at least one site");
  int total = 0;
  for (int v : rho_) {
    if (v < 0) throw ValidationError("occupation numbers must be nonnegative");
    total += v;
  }
  if (total != num_marginals_)
    throw ValidationError("occupation numbers must sum to N (" +
                          std::to_string(total) + " != " +
                          std::to_string(num_marginals_) + ")");
}

Marginal QuantizedMeasure::marginal() const {
  std::vector<double> w(rho_.size());
  for (std::size_t i = 0; i < rho_.size(); ++i)
    w[i] = static_cast<double>(rho_[i]) / static_cast<double>(num_marginals_);
  return Marginal(std::move(w));
}

bool QuantizedMeasure::operator<(const QuantizedMeasure& other) const {
  if (rho_ != other.rho_) return rho_ < other.rho_;
  return num_marginals_ < other.num_marginals_;
}

std::uint64_t quantized_count(int num_sites, int num_marginals) {
  if (num_sites < 1 || num_marginals < 1)
    throw ValidationError("quantized_count needs ell >= 1 and N >= 1");
  return binomial(static_cast<std::uint64_t>(num_marginals) +
                      static_cast<std::uint64_t>(num_sites) - 1,
                  static_cast<std::uint64_t>(num_sites) - 1);
}

namespace {

// Successor in lexicographically decreasing order: take one unit from the
// rightmost nonzero among the first ell-1 slots and pile everything to its
// right (plus that unit) immediately after it.
bool next_occupation(std::vector<int>& rho) {
  const int l = static_cast<int>(rho.size());
  int k = -1;
  for (int i = l - 2; i >= 0; --i) {
    if (rho[static_cast<std::size_t>(i)] > 0) {
      k = i;
      break;
    }
  }
  if (k < 0) return false;
  int suffix = 0;
  for (int i = k + 1; i < l; ++i) {
    suffix += rho[static_cast<std::size_t>(i)];
    rho[static_cast<std::size_t>(i)] = 0;
  }
  rho[static_cast<std::size_t>(k)] -= 1;
  rho[static_cast<std::size_t>(k) + 1] = suffix + 1;
  return true;
}

}  // namespace

std::vector<QuantizedMeasure> enumerate_quantized(int num_sites, int num_marginals,
                                                  std::uint64_t limit) {
  const std::uint64_t count = quantized_count(num_sites, num_marginals);
  if (count >= kEnumerationHardLimit)
    throw CapacityError("catalog for ell=" + std::to_string(num_sites) +
                        ", N=" + std::to_string(num_marginals) +
                        " exceeds the 2^32 indexing ceiling");
  if (count > limit)
    throw CapacityError("catalog size " + std::to_string(count) +
                        " exceeds the enumeration limit " + std::to_string(limit));
  std::vector<QuantizedMeasure> out;
  out.reserve(count);
  for_each_occupation(num_sites, num_marginals, [&](std::span<const int> rho) {
    out.emplace_back(num_marginals, std::vector<int>(rho.begin(), rho.end()));
  });
  return out;
}

void for_each_occupation(int num_sites, int num_marginals,
                         const std::function<void(std::span<const int>)>& fn) {
  if (num_sites < 1 || num_marginals < 1)
    throw ValidationError("occupation enumeration needs ell >= 1 and N >= 1");
  std::vector<int> rho(static_cast<std::size_t>(num_sites), 0);
  rho[0] = num_marginals;
  do {
    fn(std::span<const int>(rho));
  } while (next_occupation(rho));
}

}  // namespace mmot
