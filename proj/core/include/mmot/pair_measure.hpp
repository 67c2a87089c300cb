#pragma once

#include <vector>

#include "mmot/marginal.hpp"

namespace mmot {

/// Symmetric measure on X^2 with total mass 1, stored as a dense ell x ell
/// matrix. Symmetry is exact (entries are mirrored at construction).
/// Probability measures are nonnegative; the marginal-to-correlated-state
/// map also produces signed instances, so nonnegativity is opt-out via the
/// signed_measure factory.
class PairMeasure {
 public:
  /// Validates symmetry (exact), nonnegativity, and unit mass.
  static PairMeasure probability(int size, std::vector<double> row_major);

  /// Validates symmetry (exact) and unit mass; entries may be negative.
  static PairMeasure signed_measure(int size, std::vector<double> row_major);

  /// Builds from the upper triangle (i <= j), mirroring exactly.
  static PairMeasure from_upper_triangle(int size,
                                         const std::vector<double>& upper,
                                         bool allow_signed = false);

  int size() const { return size_; }
  double at(int i, int j) const {
    return m_[static_cast<std::size_t>(i) * static_cast<std::size_t>(size_) +
              static_cast<std::size_t>(j)];
  }
  const std::vector<double>& data() const { return m_; }

  bool nonnegative(double tol = 0.0) const;

  /// Row sums; equal to the one-point marginal for probability measures.
  std::vector<double> row_sums() const;

  /// Row sums as a validated Marginal (throws for signed measures).
  Marginal marginal() const;

  double diagonal_mass() const;
  double total_mass() const;

  /// Largest absolute entrywise difference.
  static double max_abs_difference(const PairMeasure& a, const PairMeasure& b);

  bool operator==(const PairMeasure&) const = default;

 private:
  PairMeasure(int size, std::vector<double> m) : size_(size), m_(std::move(m)) {}

  int size_;
  std::vector<double> m_;
};

}  // namespace mmot
