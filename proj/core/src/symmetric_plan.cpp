#include "mmot/symmetric_plan.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "mmot/errors.hpp"

namespace mmot {

namespace {

void check_key(const MultiIndex& key, int num_marginals, int num_sites) {
  if (key.size() != static_cast<std::size_t>(num_marginals))
    throw ValidationError("plan key has wrong length");
  if (!is_valid_multi_index(key, num_sites))
    throw ValidationError("plan key must be nondecreasing with sites in range");
}

double total_mass(const SymmetricPlan::EntryMap& entries) {
  double s = 0.0;
  for (const auto& [key, w] : entries) s += w;
  return s;
}

}  // namespace

SymmetricPlan::SymmetricPlan(int num_marginals, int num_sites, EntryMap entries)
    : num_marginals_(num_marginals), num_sites_(num_sites),
      entries_(std::move(entries)) {
  if (num_marginals_ < 1) throw ValidationError("plan needs N >= 1");
  if (num_sites_ < 1) throw ValidationError("plan needs ell >= 1");
  for (auto it = entries_.begin(); it != entries_.end();) {
    check_key(it->first, num_marginals_, num_sites_);
    if (std::isnan(it->second) || it->second < 0.0)
      throw ValidationError("plan weights must be nonnegative");
    if (it->second < kWeightFloor)
      it = entries_.erase(it);
    else
      ++it;
  }
  if (entries_.empty()) throw ValidationError("plan must carry mass");
  const double s = total_mass(entries_);
  if (std::abs(s - 1.0) > kMassTolerance)
    throw ValidationError("plan mass " + std::to_string(s) +
                          " deviates from 1 beyond tolerance");
}

SymmetricPlan SymmetricPlan::renormalized(int num_marginals, int num_sites,
                                          EntryMap entries, double slack) {
  for (auto it = entries.begin(); it != entries.end();) {
    if (std::isnan(it->second) || it->second < 0.0)
      throw ValidationError("plan weights must be nonnegative");
    if (it->second < kWeightFloor)
      it = entries.erase(it);
    else
      ++it;
  }
  const double s = total_mass(entries);
  if (std::abs(s - 1.0) > slack)
    throw ValidationError("plan mass " + std::to_string(s) +
                          " too far from 1 to renormalize");
  // Only scale when the strict tolerance actually requires it; this keeps
  // renormalization idempotent on already-normalized data.
  if (std::abs(s - 1.0) > kMassTolerance)
    for (auto& [key, w] : entries) w /= s;
  return SymmetricPlan(num_marginals, num_sites, std::move(entries));
}

SymmetricPlan SymmetricPlan::dirac(int num_marginals, int num_sites,
                                   MultiIndex index) {
  EntryMap entries;
  entries.emplace(std::move(index), 1.0);
  return SymmetricPlan(num_marginals, num_sites, std::move(entries));
}

double SymmetricPlan::weight(std::span<const int> index) const {
  const auto it = entries_.find(sorted_index(index));
  return it == entries_.end() ? 0.0 : it->second;
}

Marginal SymmetricPlan::marginal_one() const {
  // Per-key occupation counting, no renormalization: Dirac marginals come
  // out exactly rho/N.
  std::vector<double> lambda(static_cast<std::size_t>(num_sites_), 0.0);
  for (const auto& [key, w] : entries_) {
    const std::vector<int> rho = index_occupations(key, num_sites_);
    for (int i = 0; i < num_sites_; ++i)
      if (rho[static_cast<std::size_t>(i)] != 0)
        lambda[static_cast<std::size_t>(i)] +=
            w * rho[static_cast<std::size_t>(i)] / num_marginals_;
  }
  return Marginal(std::move(lambda));
}

PairMeasure SymmetricPlan::marginal_pair() const {
  if (num_marginals_ < 2)
    throw ValidationError("two-point marginal needs N >= 2");
  const int l = num_sites_;
  std::vector<double> upper(
      static_cast<std::size_t>(l) * (static_cast<std::size_t>(l) + 1) / 2, 0.0);
  const double pairs = static_cast<double>(num_marginals_) *
                       (static_cast<double>(num_marginals_) - 1.0);
  for (const auto& [key, w] : entries_) {
    const std::vector<int> rho = index_occupations(key, l);
    std::size_t k = 0;
    for (int i = 0; i < l; ++i) {
      for (int j = i; j < l; ++j) {
        const double count =
            (i == j) ? static_cast<double>(rho[static_cast<std::size_t>(i)]) *
                           (rho[static_cast<std::size_t>(i)] - 1)
                     : static_cast<double>(rho[static_cast<std::size_t>(i)]) *
                           rho[static_cast<std::size_t>(j)];
        upper[k] += w * count / pairs;
        ++k;
      }
    }
  }
  return PairMeasure::from_upper_triangle(l, upper);
}

namespace {

// Enumerates sub-occupations sigma <= rho with |sigma| = k and adds the
// orbit weight of each to `out`.
void accumulate_suboccupations(const std::vector<int>& rho, int k, double w,
                               int num_marginals,
                               SymmetricPlan::EntryMap& out) {
  const int l = static_cast<int>(rho.size());
  std::vector<int> sigma(static_cast<std::size_t>(l), 0);
  // weight of sigma: w * [k! / prod sigma_i!] * prod falling(rho_i, sigma_i)
  //                    / falling(N, k)
  double denom = 1.0;
  for (int t = 0; t < k; ++t) denom *= static_cast<double>(num_marginals - t);

  std::function<void(int, int, double, double)> rec =
      [&](int site, int remaining, double arrangements, double positions) {
        // arrangements = k!/prod(sigma!), positions = prod falling(rho, sigma)
        if (site == l) {
          if (remaining == 0) {
            MultiIndex key = index_from_occupations(sigma);
            out[key] += w * arrangements * positions / denom;
          }
          return;
        }
        const int cap = std::min(remaining, rho[static_cast<std::size_t>(site)]);
        double arr = arrangements;
        double pos = positions;
        int filled_before = k - remaining;
        for (int c = 0; c <= cap; ++c) {
          if (c > 0) {
            arr = arr * static_cast<double>(filled_before + c) / c;
            pos = pos * static_cast<double>(
                            rho[static_cast<std::size_t>(site)] - c + 1);
          }
          sigma[static_cast<std::size_t>(site)] = c;
          rec(site + 1, remaining - c, arr, pos);
        }
        sigma[static_cast<std::size_t>(site)] = 0;
      };
  rec(0, k, 1.0, 1.0);
}

}  // namespace

SymmetricPlan SymmetricPlan::marginal_k(int k) const {
  if (k < 1 || k > num_marginals_)
    throw ValidationError("marginal order k out of range");
  if (k == num_marginals_) return *this;
  EntryMap out;
  for (const auto& [key, w] : entries_)
    accumulate_suboccupations(index_occupations(key, num_sites_), k, w,
                              num_marginals_, out);
  return SymmetricPlan::renormalized(k, num_sites_, std::move(out), 1e-9);
}

double SymmetricPlan::max_abs_difference(const SymmetricPlan& a,
                                         const SymmetricPlan& b) {
  double d = 0.0;
  for (const auto& [key, w] : a.entries_)
    d = std::max(d, std::abs(w - b.weight(key)));
  for (const auto& [key, w] : b.entries_)
    d = std::max(d, std::abs(w - a.weight(key)));
  return d;
}

MarginalResult marginal(const SymmetricPlan& plan, int k) {
  if (k == 1) return plan.marginal_one();
  if (k == 2) return plan.marginal_pair();
  return plan.marginal_k(k);
}

SymmetricPlan symmetrize(
    int num_marginals, int num_sites,
    const std::vector<std::pair<std::vector<int>, double>>& weights,
    double slack) {
  SymmetricPlan::EntryMap entries;
  for (const auto& [index, w] : weights) {
    if (std::isnan(w) || w < 0.0)
      throw ValidationError("symmetrize input weights must be nonnegative");
    if (index.size() != static_cast<std::size_t>(num_marginals))
      throw ValidationError("symmetrize input tuple has wrong length");
    for (int site : index)
      if (site < 0 || site >= num_sites)
        throw ValidationError("symmetrize input site out of range");
    entries[sorted_index(index)] += w;
  }
  return SymmetricPlan::renormalized(num_marginals, num_sites,
                                     std::move(entries), slack);
}

}  // namespace mmot
