#pragma once

#include <vector>

namespace mmot {

/// Probability tolerance shared by all measure types: sums must match 1
/// to this accuracy, entrywise nonnegativity is strict.
inline constexpr double kMassTolerance = 1e-12;

/// Weights smaller than this are treated as numerical dust and dropped
/// during sparse-measure construction.
inline constexpr double kWeightFloor = 1e-14;

/// One-point probability measure on a state space of given size.
class Marginal {
 public:
  /// Validating constructor: entries >= 0, sum within kMassTolerance of 1.
  explicit Marginal(std::vector<double> weights);

  /// Explicit-renormalization constructor for callers holding nearly
  /// normalized data; `slack` bounds how far the input sum may be from 1.
  static Marginal renormalized(std::vector<double> weights, double slack = 1e-9);

  static Marginal uniform(int size);
  static Marginal dirac(int size, int site);

  int size() const { return static_cast<int>(weights_.size()); }
  double operator[](int i) const { return weights_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& weights() const { return weights_; }

  /// True when every entry is within tol of a multiple of 1/N.
  bool is_quantized(int num_marginals, double tol = 1e-9) const;

  /// Nearest occupation vector N*lambda, entries rounded; callers should
  /// check is_quantized first when exactness matters.
  std::vector<int> occupations(int num_marginals) const;

  bool operator==(const Marginal&) const = default;

 private:
  std::vector<double> weights_;
};

}  // namespace mmot
