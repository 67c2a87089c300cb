#include "mmot/marginal.hpp"

#include <cmath>
#include <string>

#include "mmot/errors.hpp"

namespace mmot {

namespace {
void check_entries(const std::vector<double>& w) {
  if (w.empty()) throw ValidationError("marginal must have at least one entry");
  for (double v : w) {
    if (!(v >= 0.0))  // catches NaN as well
      throw ValidationError("marginal entries must be nonnegative");
  }
}

double sum_of(const std::vector<double>& w) {
  double s = 0.0;
  for (double v : w) s += v;
  return s;
}
}  // namespace

Marginal::Marginal(std::vector<double> weights) : weights_(std::move(weights)) {
  check_entries(weights_);
  const double s = sum_of(weights_);
  if (std::abs(s - 1.0) > kMassTolerance)
    throw ValidationError("marginal mass " + std::to_string(s) +
                          " deviates from 1 beyond tolerance");
}

Marginal Marginal::renormalized(std::vector<double> weights, double slack) {
  check_entries(weights);
  const double s = sum_of(weights);
  if (std::abs(s - 1.0) > slack)
    throw ValidationError("marginal mass " + std::to_string(s) +
                          " too far from 1 to renormalize");
  if (std::abs(s - 1.0) > kMassTolerance)
    for (double& v : weights) v /= s;
  return Marginal(std::move(weights));
}

Marginal Marginal::uniform(int size) {
  if (size < 1) throw ValidationError("uniform marginal needs size >= 1");
  std::vector<double> w(static_cast<std::size_t>(size),
                        1.0 / static_cast<double>(size));
  return Marginal::renormalized(std::move(w), 1e-9);
}

Marginal Marginal::dirac(int size, int site) {
  if (site < 0 || site >= size)
    throw ValidationError("dirac site out of range");
  std::vector<double> w(static_cast<std::size_t>(size), 0.0);
  w[static_cast<std::size_t>(site)] = 1.0;
  return Marginal(std::move(w));
}

bool Marginal::is_quantized(int num_marginals, double tol) const {
  if (num_marginals < 1) return false;
  for (double v : weights_) {
    const double scaled = v * num_marginals;
    if (std::abs(scaled - std::round(scaled)) > tol * num_marginals) return false;
  }
  return true;
}

std::vector<int> Marginal::occupations(int num_marginals) const {
  std::vector<int> rho(weights_.size());
  for (std::size_t i = 0; i < weights_.size(); ++i)
    rho[i] = static_cast<int>(std::llround(weights_[i] * num_marginals));
  return rho;
}

}  // namespace mmot
