#include "mmot/sae_state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mmot/errors.hpp"
#include "mmot/multi_index.hpp"

namespace mmot {

SAEState::SAEState(int num_marginals, int num_sites, std::vector<Site> support,
                   double drop)
    : num_marginals_(num_marginals), num_sites_(num_sites),
      support_(std::move(support)) {
  if (num_marginals_ < 1) throw ValidationError("SAE state needs N >= 1");
  if (num_sites_ < 1) throw ValidationError("SAE state needs ell >= 1");
  std::erase_if(support_, [&](const Site& s) {
    if (std::isnan(s.weight) || s.weight < -kSaeWeightTolerance)
      throw ValidationError("SAE weights must be nonnegative");
    return s.weight <= drop;
  });
  if (support_.empty()) throw ValidationError("SAE state must carry mass");
  double total = 0.0;
  for (const Site& s : support_) {
    if (s.distribution.num_marginals() != num_marginals_ ||
        s.distribution.size() != num_sites_)
      throw ValidationError("SAE support distribution has wrong shape");
    total += s.weight;
  }
  if (std::abs(total - 1.0) > kSaeWeightTolerance)
    throw ValidationError("SAE weights sum to " + std::to_string(total) +
                          ", expected 1");
}

SAEState SAEState::from_lp_weights(int num_marginals, int num_sites,
                                   std::vector<Site> support, double drop) {
  double total = 0.0;
  std::erase_if(support, [&](const Site& s) { return s.weight <= drop; });
  for (const Site& s : support) total += s.weight;
  if (!(total > 0.0))
    throw ValidationError("SAE support from LP carries no mass");
  for (Site& s : support) s.weight /= total;
  return SAEState(num_marginals, num_sites, std::move(support));
}

const std::vector<std::vector<int>>& SAEState::maps() const {
  if (!maps_) throw ValidationError("SAE state carries no maps");
  return *maps_;
}

Marginal SAEState::average_marginal() const {
  std::vector<double> avg(static_cast<std::size_t>(num_sites_), 0.0);
  for (const Site& s : support_) {
    const auto& rho = s.distribution.occupations();
    for (int i = 0; i < num_sites_; ++i)
      avg[static_cast<std::size_t>(i)] +=
          s.weight * rho[static_cast<std::size_t>(i)] / num_marginals_;
  }
  return Marginal::renormalized(std::move(avg), 1e-8);
}

SymmetricPlan SAEState::expand() const {
  SymmetricPlan::EntryMap entries;
  for (const Site& s : support_)
    entries[index_from_occupations(s.distribution.occupations())] += s.weight;
  return SymmetricPlan::renormalized(num_marginals_, num_sites_,
                                     std::move(entries), 1e-8);
}

void SAEState::realize_maps() {
  std::vector<std::vector<int>> maps(
      static_cast<std::size_t>(num_marginals_),
      std::vector<int>(static_cast<std::size_t>(num_sites_)));
  for (int nu = 0; nu < num_sites_; ++nu) {
    if (static_cast<std::size_t>(nu) < support_.size()) {
      const MultiIndex values = index_from_occupations(
          support_[static_cast<std::size_t>(nu)].distribution.occupations());
      for (int k = 0; k < num_marginals_; ++k)
        maps[static_cast<std::size_t>(k)][static_cast<std::size_t>(nu)] =
            values[static_cast<std::size_t>(k)];
    } else {
      for (int k = 0; k < num_marginals_; ++k)
        maps[static_cast<std::size_t>(k)][static_cast<std::size_t>(nu)] = nu;
    }
  }
  maps_ = std::move(maps);
}

void SAEState::attach_maps(std::vector<std::vector<int>> maps) {
  if (maps.size() != static_cast<std::size_t>(num_marginals_))
    throw ValidationError("SAE maps: need one map per marginal");
  for (const auto& m : maps) {
    if (m.size() != static_cast<std::size_t>(num_sites_))
      throw ValidationError("SAE maps: each map needs one image per site");
    for (int v : m)
      if (v < 0 || v >= num_sites_)
        throw ValidationError("SAE maps: image out of range");
  }
  // The empirical value distribution at each support site must reproduce
  // lambda^(nu) exactly.
  for (std::size_t nu = 0; nu < support_.size(); ++nu) {
    std::vector<int> counts(static_cast<std::size_t>(num_sites_), 0);
    for (int k = 0; k < num_marginals_; ++k)
      ++counts[static_cast<std::size_t>(maps[static_cast<std::size_t>(k)][nu])];
    if (counts != support_[nu].distribution.occupations())
      throw ValidationError(
          "SAE maps do not realize the support distributions");
  }
  maps_ = std::move(maps);
}

}  // namespace mmot
