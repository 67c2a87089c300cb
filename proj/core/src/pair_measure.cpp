#include "mmot/pair_measure.hpp"

#include <cmath>
#include <string>

#include "mmot/errors.hpp"

namespace mmot {

namespace {
void check_shape(int size, const std::vector<double>& m) {
  if (size < 1) throw ValidationError("pair measure needs at least one site");
  if (m.size() != static_cast<std::size_t>(size) * static_cast<std::size_t>(size))
    throw ValidationError("pair measure matrix has wrong shape");
  for (double v : m)
    if (std::isnan(v)) throw ValidationError("pair measure contains NaN");
}

void check_symmetric(int size, const std::vector<double>& m) {
  for (int i = 0; i < size; ++i)
    for (int j = i + 1; j < size; ++j) {
      const std::size_t a = static_cast<std::size_t>(i) * size + j;
      const std::size_t b = static_cast<std::size_t>(j) * size + i;
      if (m[a] != m[b])
        throw ValidationError("pair measure must be exactly symmetric");
    }
}

void check_mass(const std::vector<double>& m) {
  double s = 0.0;
  for (double v : m) s += v;
  if (std::abs(s - 1.0) > kMassTolerance)
    throw ValidationError("pair measure mass " + std::to_string(s) +
                          " deviates from 1 beyond tolerance");
}
}  // namespace

PairMeasure PairMeasure::probability(int size, std::vector<double> row_major) {
  check_shape(size, row_major);
  check_symmetric(size, row_major);
  check_mass(row_major);
  for (double v : row_major)
    if (v < 0.0)
      throw ValidationError("probability pair measure must be nonnegative");
  return PairMeasure(size, std::move(row_major));
}

PairMeasure PairMeasure::signed_measure(int size, std::vector<double> row_major) {
  check_shape(size, row_major);
  check_symmetric(size, row_major);
  check_mass(row_major);
  return PairMeasure(size, std::move(row_major));
}

PairMeasure PairMeasure::from_upper_triangle(int size,
                                             const std::vector<double>& upper,
                                             bool allow_signed) {
  const std::size_t expected =
      static_cast<std::size_t>(size) * (static_cast<std::size_t>(size) + 1) / 2;
  if (upper.size() != expected)
    throw ValidationError("upper triangle has wrong length");
  std::vector<double> m(static_cast<std::size_t>(size) * size, 0.0);
  std::size_t k = 0;
  for (int i = 0; i < size; ++i)
    for (int j = i; j < size; ++j) {
      m[static_cast<std::size_t>(i) * size + j] = upper[k];
      m[static_cast<std::size_t>(j) * size + i] = upper[k];
      ++k;
    }
  return allow_signed ? signed_measure(size, std::move(m))
                      : probability(size, std::move(m));
}

bool PairMeasure::nonnegative(double tol) const {
  for (double v : m_)
    if (v < -tol) return false;
  return true;
}

std::vector<double> PairMeasure::row_sums() const {
  std::vector<double> r(static_cast<std::size_t>(size_), 0.0);
  for (int i = 0; i < size_; ++i)
    for (int j = 0; j < size_; ++j) r[static_cast<std::size_t>(i)] += at(i, j);
  return r;
}

Marginal PairMeasure::marginal() const {
  return Marginal::renormalized(row_sums(), 1e-9);
}

double PairMeasure::diagonal_mass() const {
  double s = 0.0;
  for (int i = 0; i < size_; ++i) s += at(i, i);
  return s;
}

double PairMeasure::total_mass() const {
  double s = 0.0;
  for (double v : m_) s += v;
  return s;
}

double PairMeasure::max_abs_difference(const PairMeasure& a, const PairMeasure& b) {
  if (a.size_ != b.size_)
    throw ValidationError("pair measures have different sizes");
  double d = 0.0;
  for (std::size_t k = 0; k < a.m_.size(); ++k)
    d = std::max(d, std::abs(a.m_[k] - b.m_[k]));
  return d;
}

}  // namespace mmot
