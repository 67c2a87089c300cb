#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mmot::lp {

enum class Sense { minimize, maximize };
enum class PivotRule { bland, dantzig };
enum class SolveStatus { optimal, infeasible, unbounded };

/// Dense column-major matrix; the revised simplex touches the constraint
/// matrix only column by column.
template <class T>
struct ColMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<T> data;

  ColMatrix() = default;
  ColMatrix(int r, int c)
      : rows(r), cols(c),
        data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), T(0)) {}

  T& at(int r, int c) {
    return data[static_cast<std::size_t>(c) * static_cast<std::size_t>(rows) +
                static_cast<std::size_t>(r)];
  }
  const T& at(int r, int c) const {
    return data[static_cast<std::size_t>(c) * static_cast<std::size_t>(rows) +
                static_cast<std::size_t>(r)];
  }
  std::span<const T> col(int c) const {
    return std::span<const T>(
        data.data() + static_cast<std::size_t>(c) * static_cast<std::size_t>(rows),
        static_cast<std::size_t>(rows));
  }
};

/// Standard-form program: optimize c'x subject to Ax = b, x >= 0.
struct LinearProgram {
  Sense sense = Sense::minimize;
  ColMatrix<double> A;
  std::vector<double> b;
  std::vector<double> c;

  int rows() const { return A.rows; }
  int cols() const { return A.cols; }
  void validate() const;
};

struct SolverStats {
  long pivots = 0;
  long degenerate_pivots = 0;
  int refactorizations = 0;
  int dropped_rows = 0;
  int phase_one_pivots = 0;
};

struct LPSolution {
  SolveStatus status = SolveStatus::optimal;
  std::vector<double> x;
  double objective = 0.0;
  /// One basic column per constraint row; -1 on rows found redundant.
  std::vector<int> basis;
  /// Dual values per row (0 on redundant rows), in the original sense.
  std::vector<double> duals;
  /// c_j - y'A_j per column; >= 0 at a minimum, <= 0 at a maximum for
  /// nonbasic columns.
  std::vector<double> reduced_costs;
  /// Farkas certificate rows when infeasible: y'A <= 0 componentwise and
  /// y'b > 0.
  std::vector<double> farkas;
  SolverStats stats;
};

struct SimplexOptions {
  PivotRule rule = PivotRule::bland;
  int refactor_every = 50;
  /// Dantzig runs fall back to Bland after this many consecutive
  /// degenerate pivots.
  int dantzig_degenerate_fallback = 20;
  double tol_reduced = 1e-9;
  double tol_pivot = 1e-9;
  double tol_feasibility = 1e-9;
  double condition_limit = 1e12;
  /// Verify residual, sign, vertex, and complementary-slackness bounds on
  /// every optimal return; violations raise NumericalError.
  bool check_solution = true;
};

/// Two-phase revised simplex with Bland's anti-cycling rule (optionally
/// Dantzig with automatic fallback), dense LU basis factorization with
/// product-form updates, refactorization every `refactor_every` pivots.
/// Deterministic for identical inputs.
LPSolution solve(const LinearProgram& lp, const SimplexOptions& options = {});

/// Smallest reduced-cost slack over nonbasic columns of an optimal
/// solution (positive margins certify the basis dual prices every other
/// column strictly worse).
double basis_margin(const LinearProgram& lp, const LPSolution& sol);

/// Support-based uniqueness margin: the largest t (capped at `cap`) such
/// that some dual vector prices every support column exactly and every
/// other column worse by at least t. A positive value proves that every
/// optimal solution vanishes off the support, hence that the optimum is
/// the unique solution when the support columns are linearly independent.
/// Basis margins can vanish at degenerate ties even for unique optima;
/// this certificate does not.
double support_margin(const LinearProgram& lp, std::span<const int> support,
                      double cap = 1.0);

}  // namespace mmot::lp
