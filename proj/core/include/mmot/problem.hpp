#pragma once

#include <filesystem>
#include <string>

#include "mmot/costs.hpp"
#include "mmot/marginal.hpp"
#include "mmot/solver.hpp"
#include "mmot/state_space.hpp"

namespace mmot {

/// Solver selection and knobs carried by a problem file; command-line
/// flags override these field by field.
struct SolverSettings {
  std::string method = "sae";  // sae | colgen | oracle | monge
  Pricing pricing = Pricing::enumerate;
  bool exact = false;
  std::uint64_t seed = 0;
  int threads = 0;
  SolverLimits limits;
};

/// One problem file drives every solver, so oracle comparisons never
/// diverge on input parsing.
struct Problem {
  StateSpace space;
  int num_marginals;
  Marginal marginal;
  /// True when the file said "uniform"; the exact mode then uses the
  /// exact rational 1/ell instead of rationalized doubles.
  bool uniform_marginal = false;
  CostSpec cost;
  SolverSettings settings;
};

/// Reads a problem file; relative cost-file references resolve against the
/// problem file's directory.
Problem load_problem(const std::filesystem::path& path);

}  // namespace mmot
