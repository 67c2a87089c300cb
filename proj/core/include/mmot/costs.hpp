#pragma once

#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <span>
#include <variant>
#include <vector>

#include "mmot/multi_index.hpp"

namespace mmot {

inline constexpr double kInfiniteCost = std::numeric_limits<double>::infinity();

/// ell points in R^d backing the geometric cost generators.
struct PointCloud {
  std::vector<std::vector<double>> points;

  explicit PointCloud(std::vector<std::vector<double>> pts);
  int size() const { return static_cast<int>(points.size()); }
  int dim() const { return static_cast<int>(points.front().size()); }
  double distance(int i, int j) const;
};

/// Symmetric ell x ell pairwise cost; +inf entries allowed, NaN rejected.
/// The diagonal is meaningful (self-interaction of doubly occupied sites).
class PairwiseCost {
 public:
  static PairwiseCost from_matrix(int size, std::vector<double> row_major);

  int size() const { return size_; }
  double at(int i, int j) const {
    return m_[static_cast<std::size_t>(i) * static_cast<std::size_t>(size_) +
              static_cast<std::size_t>(j)];
  }
  const std::vector<double>& data() const { return m_; }

 private:
  PairwiseCost(int size, std::vector<double> m) : size_(size), m_(std::move(m)) {}
  int size_;
  std::vector<double> m_;
};

/// N-body cost given by a table on sorted multi-indices, read as a
/// symmetrized cost. Absent keys mean +inf (forbidden configurations).
struct NBodyTable {
  int num_marginals = 0;
  int num_sites = 0;
  std::map<MultiIndex, double> entries;

  double at(std::span<const int> index) const;
};

/// N-body cost given by an evaluator on arbitrary-order index tuples.
/// `symmetric` promises invariance under permuting the tuple, letting
/// callers skip arrangement averaging.
struct NBodyCallable {
  int num_marginals = 0;
  int num_sites = 0;
  std::function<double(std::span<const int>)> fn;
  bool symmetric = false;
};

using CostSpec = std::variant<PairwiseCost, NBodyTable, NBodyCallable>;

int cost_num_sites(const CostSpec& cost);

/// c_ij = 1/|a_i - a_j|, c_ii = +inf. Points closer than 1e-14 produce an
/// off-diagonal +inf (with a log warning).
PairwiseCost coulomb_pairwise(const PointCloud& cloud);

/// c_ij = (|a_i - a_j| - r0)^2 including the diagonal (c_ii = r0^2).
PairwiseCost spring_pairwise(const PointCloud& cloud, double r0);

/// All-ones matrix with zero diagonal.
PairwiseCost discrete_metric_pairwise(int size);

/// Lifts a pairwise cost to the N-body evaluator
/// c_N(x) = sum_{p<q} c(x_p, x_q); symmetric by construction.
NBodyCallable nbody_from_pairwise(const PairwiseCost& cost, int num_marginals);

/// JSON cost files: {"type":"pairwise","matrix":[[...]]} with "inf" tokens
/// for +inf, or {"type":"nbody","N":...,"l":...,"entries":[{"idx":[...],
/// "c":...}]} with 1-based indices. Callables cannot be serialized.
CostSpec load_cost(const std::filesystem::path& path);
void save_cost(const CostSpec& cost, const std::filesystem::path& path);

}  // namespace mmot
