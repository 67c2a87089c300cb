#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <span>
#include <vector>

#include "mmot/simplex.hpp"

namespace mmot {

/// Exact rational scalar used to adjudicate disputed floating solves.
using Rational = boost::multiprecision::cpp_rational;

/// Exact dyadic value of a binary64 number.
inline Rational rational_from_double(double v) { return Rational(v); }

inline double rational_to_double(const Rational& r) {
  return r.convert_to<double>();
}

}  // namespace mmot

namespace mmot::lp {

/// Exact mode handles modest column counts only; beyond this the floating
/// solver is the tool.
inline constexpr int kExactColumnLimit = 500;

struct RationalProgram {
  Sense sense = Sense::minimize;
  ColMatrix<mmot::Rational> A;
  std::vector<mmot::Rational> b;
  std::vector<mmot::Rational> c;

  int rows() const { return A.rows; }
  int cols() const { return A.cols; }
};

struct RationalSolution {
  SolveStatus status = SolveStatus::optimal;
  std::vector<mmot::Rational> x;
  mmot::Rational objective;
  std::vector<int> basis;
  std::vector<mmot::Rational> duals;
  std::vector<mmot::Rational> reduced_costs;
  std::vector<mmot::Rational> farkas;
  SolverStats stats;
};

/// The same two-phase revised simplex run in exact rational arithmetic
/// (all tolerances zero, Bland's rule). Throws CapacityError past
/// kExactColumnLimit columns.
RationalSolution solve_exact(const RationalProgram& prog);

/// Exact counterpart of support_margin.
mmot::Rational support_margin_exact(const RationalProgram& prog,
                                    std::span<const int> support,
                                    const mmot::Rational& cap = mmot::Rational(1));

}  // namespace mmot::lp
