#pragma once

// Two-phase revised simplex shared by the binary64 and exact-rational
// instantiations. The scalar type T must support field arithmetic and
// comparisons; Tolerances<T> carries the zero thresholds (all zero in the
// exact instantiation).

#include <algorithm>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mmot/errors.hpp"
#include "mmot/simplex.hpp"

namespace mmot::lp::detail {

template <class T>
struct Tolerances {
  T reduced{};      // entering eligibility: rc < -reduced
  T pivot{};        // pivot element magnitude threshold
  T feasibility{};  // phase-1 objective threshold, scaled by (1 + |b|inf)
  T ratio_tie{};    // ratio-test tie window for the Bland index tie-break
  double condition_limit = 0.0;  // 0 disables the estimate (exact mode)
};

template <class T>
struct EngineOptions {
  PivotRule rule = PivotRule::bland;
  int refactor_every = 50;
  int dantzig_degenerate_fallback = 20;
  Tolerances<T> tol;
  /// Per-pivot trace sink (basis and value dumps); null when tracing is off.
  std::function<void(const std::string&)> trace;
};

template <class T>
struct EngineResult {
  SolveStatus status = SolveStatus::optimal;
  std::vector<T> x;
  T objective{};
  std::vector<int> basis;  // per original row, -1 when dropped
  std::vector<T> duals;    // per original row, 0 when dropped
  std::vector<T> reduced_costs;
  std::vector<T> farkas;
  SolverStats stats;
};

template <class T>
T abs_value(const T& v) {
  return v < T(0) ? T(-v) : v;
}

template <class T>
class SimplexEngine {
 public:
  SimplexEngine(const ColMatrix<T>& A, std::vector<T> b, std::vector<T> c,
                EngineOptions<T> options)
      : A_(A), b_(std::move(b)), c_(std::move(c)), options_(options),
        m_(A.rows), n_(A.cols) {
    flip_.assign(static_cast<std::size_t>(m_), T(1));
    T binf{};
    for (int i = 0; i < m_; ++i) {
      if (b_[static_cast<std::size_t>(i)] < T(0)) {
        b_[static_cast<std::size_t>(i)] = -b_[static_cast<std::size_t>(i)];
        flip_[static_cast<std::size_t>(i)] = T(-1);
      }
      if (b_[static_cast<std::size_t>(i)] > binf)
        binf = b_[static_cast<std::size_t>(i)];
    }
    b_scale_ = T(1) + binf;
  }

  EngineResult<T> run() {
    init_phase_one();
    iterate_to_optimality();

    T infeasibility{};
    for (int p = 0; p < mk_; ++p)
      if (basis_[at(p)] >= n_) infeasibility += xB_[at(p)];
    if (infeasibility > options_.tol.feasibility * b_scale_)
      return make_infeasible();

    cleanup_artificials();
    phase1_ = false;
    consecutive_degenerate_ = 0;
    iterate_to_optimality();
    return make_result();
  }

 private:
  static std::size_t at(int i) { return static_cast<std::size_t>(i); }

  // ----- column access (row flips applied on the fly) -----

  void gather_column(int j, std::vector<T>& out) const {
    out.resize(at(mk_));
    for (int p = 0; p < mk_; ++p) {
      const int row = rows_[at(p)];
      out[at(p)] = flip_[at(row)] * A_.at(row, j);
    }
  }

  T column_dot(const std::vector<T>& y, int j) const {
    T s{};
    for (int p = 0; p < mk_; ++p) {
      const int row = rows_[at(p)];
      s += y[at(p)] * (flip_[at(row)] * A_.at(row, j));
    }
    return s;
  }

  T cost_of(int col) const {
    if (col < n_) return phase1_ ? T(0) : c_[at(col)];
    return phase1_ ? T(1) : T(0);
  }

  // ----- basis factorization: P B = L U plus product-form updates -----

  void factorize() {
    const int m = mk_;
    lu_.assign(at(m) * at(m), T(0));
    perm_.resize(at(m));
    for (int i = 0; i < m; ++i) perm_[at(i)] = i;

    std::vector<T> col;
    for (int p = 0; p < m; ++p) {
      const int j = basis_[at(p)];
      if (j < n_) {
        gather_column(j, col);
        for (int i = 0; i < m; ++i) lu_[at(i) * at(m) + at(p)] = col[at(i)];
      } else {
        const int row = j - n_;  // artificial: unit column on its own row
        for (int i = 0; i < m; ++i)
          lu_[at(i) * at(m) + at(p)] = (rows_[at(i)] == row) ? T(1) : T(0);
      }
    }

    const bool by_magnitude = options_.tol.condition_limit > 0.0;
    T min_piv{}, max_piv{};
    for (int k = 0; k < m; ++k) {
      int piv = -1;
      if (by_magnitude) {
        T best{};
        for (int i = k; i < m; ++i) {
          const T cand = abs_value(lu_[at(perm_[at(i)]) * at(m) + at(k)]);
          if (piv < 0 || cand > best) {
            piv = i;
            best = cand;
          }
        }
        if (piv >= 0 && !(best > options_.tol.pivot)) piv = -1;
      } else {
        for (int i = k; i < m; ++i) {
          if (lu_[at(perm_[at(i)]) * at(m) + at(k)] != T(0)) {
            piv = i;
            break;
          }
        }
      }
      if (piv < 0) throw NumericalError("simplex: singular basis matrix");
      std::swap(perm_[at(k)], perm_[at(piv)]);
      const int rk = perm_[at(k)];
      const T pivot = lu_[at(rk) * at(m) + at(k)];
      const T apiv = abs_value(pivot);
      if (k == 0) {
        min_piv = apiv;
        max_piv = apiv;
      } else {
        if (apiv < min_piv) min_piv = apiv;
        if (apiv > max_piv) max_piv = apiv;
      }
      for (int i = k + 1; i < m; ++i) {
        const int ri = perm_[at(i)];
        T& lik = lu_[at(ri) * at(m) + at(k)];
        if (lik == T(0)) continue;
        const T f = lik / pivot;
        lik = f;
        for (int jj = k + 1; jj < m; ++jj)
          lu_[at(ri) * at(m) + at(jj)] -= f * lu_[at(rk) * at(m) + at(jj)];
      }
    }
    // Crude condition estimate from the pivot spread.
    if (by_magnitude && min_piv > T(0) &&
        max_piv / min_piv > T(options_.tol.condition_limit))
      throw NumericalError("simplex: basis condition estimate exceeds limit");
    etas_.clear();
    ++stats_.refactorizations;
  }

  // x := B^{-1} x (x indexed by basis position on output).
  void ftran(std::vector<T>& x) const {
    const int m = mk_;
    std::vector<T> z(at(m));
    for (int k = 0; k < m; ++k) {
      T s = x[at(perm_[at(k)])];
      for (int jj = 0; jj < k; ++jj)
        s -= lu_[at(perm_[at(k)]) * at(m) + at(jj)] * z[at(jj)];
      z[at(k)] = s;
    }
    for (int k = m - 1; k >= 0; --k) {
      T s = z[at(k)];
      for (int jj = k + 1; jj < m; ++jj)
        s -= lu_[at(perm_[at(k)]) * at(m) + at(jj)] * x[at(jj)];
      x[at(k)] = s / lu_[at(perm_[at(k)]) * at(m) + at(k)];
    }
    for (const Eta& e : etas_) {
      T& xr = x[at(e.row)];
      xr = xr / e.d[at(e.row)];
      for (int i = 0; i < m; ++i) {
        if (i == e.row || e.d[at(i)] == T(0)) continue;
        x[at(i)] -= e.d[at(i)] * xr;
      }
    }
  }

  // y := B^{-T} y (y indexed by basis position on input, active row on
  // output).
  void btran(std::vector<T>& y) const {
    const int m = mk_;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      const Eta& e = *it;
      T s = y[at(e.row)];
      for (int i = 0; i < m; ++i) {
        if (i == e.row || e.d[at(i)] == T(0)) continue;
        s -= e.d[at(i)] * y[at(i)];
      }
      y[at(e.row)] = s / e.d[at(e.row)];
    }
    std::vector<T> z(at(m));
    for (int k = 0; k < m; ++k) {
      T s = y[at(k)];
      for (int jj = 0; jj < k; ++jj)
        s -= lu_[at(perm_[at(jj)]) * at(m) + at(k)] * z[at(jj)];
      z[at(k)] = s / lu_[at(perm_[at(k)]) * at(m) + at(k)];
    }
    std::vector<T> w(at(m));
    for (int k = m - 1; k >= 0; --k) {
      T s = z[at(k)];
      for (int jj = k + 1; jj < m; ++jj)
        s -= lu_[at(perm_[at(jj)]) * at(m) + at(k)] * w[at(jj)];
      w[at(k)] = s;
    }
    for (int k = 0; k < m; ++k) y[at(perm_[at(k)])] = w[at(k)];
  }

  std::vector<T> basic_duals() const {
    std::vector<T> y(at(mk_));
    for (int p = 0; p < mk_; ++p) y[at(p)] = cost_of(basis_[at(p)]);
    btran(y);
    return y;
  }

  void recompute_xB() {
    xB_.resize(at(mk_));
    for (int p = 0; p < mk_; ++p) xB_[at(p)] = b_[at(rows_[at(p)])];
    ftran(xB_);
  }

  // ----- phases -----

  void init_phase_one() {
    mk_ = m_;
    rows_.resize(at(m_));
    for (int i = 0; i < m_; ++i) rows_[at(i)] = i;
    basis_.resize(at(m_));
    for (int i = 0; i < m_; ++i) basis_[at(i)] = n_ + i;
    in_basis_.assign(at(n_), 0);
    phase1_ = true;
    rule_ = options_.rule;
    factorize();
    recompute_xB();
  }

  int choose_entering(const std::vector<T>& y) const {
    int best = -1;
    T best_rc{};
    for (int j = 0; j < n_; ++j) {
      if (in_basis_[at(j)]) continue;
      const T rc = cost_of(j) - column_dot(y, j);
      if (rc < -options_.tol.reduced) {
        if (rule_ == PivotRule::bland) return j;
        if (best < 0 || rc < best_rc) {
          best = j;
          best_rc = rc;
        }
      }
    }
    return best;
  }

  int choose_leaving(const std::vector<T>& d) const {
    int leave = -1;
    T best_ratio{};
    for (int p = 0; p < mk_; ++p) {
      const T& dp = d[at(p)];
      if (!(dp > options_.tol.pivot)) continue;
      const T ratio = xB_[at(p)] / dp;
      if (leave < 0) {
        leave = p;
        best_ratio = ratio;
        continue;
      }
      if (ratio < best_ratio - options_.tol.ratio_tie) {
        leave = p;
        best_ratio = ratio;
      } else if (!(ratio > best_ratio + options_.tol.ratio_tie) &&
                 basis_[at(p)] < basis_[at(leave)]) {
        leave = p;  // Bland tie-break: smallest leaving column index.
      }
    }
    return leave;
  }

  void pivot(int enter, int leave_pos, std::vector<T> d) {
    const T t = xB_[at(leave_pos)] / d[at(leave_pos)];
    for (int p = 0; p < mk_; ++p) {
      if (p == leave_pos || d[at(p)] == T(0)) continue;
      xB_[at(p)] -= t * d[at(p)];
    }
    xB_[at(leave_pos)] = t;

    const int leaving = basis_[at(leave_pos)];
    if (leaving < n_) in_basis_[at(leaving)] = 0;
    basis_[at(leave_pos)] = enter;
    if (enter < n_) in_basis_[at(enter)] = 1;

    etas_.push_back(Eta{leave_pos, std::move(d)});
    ++stats_.pivots;
    if (phase1_) ++stats_.phase_one_pivots;

    if (options_.trace) {
      std::ostringstream os;
      os << "pivot " << stats_.pivots << (phase1_ ? " [phase1]" : " [phase2]")
         << ": col " << enter << " in, col " << leaving << " out, step " << t
         << "; basis values";
      for (int p = 0; p < mk_; ++p)
        os << " x[" << basis_[at(p)] << "]=" << xB_[at(p)];
      options_.trace(os.str());
    }

    if (!(t > options_.tol.ratio_tie)) {
      ++stats_.degenerate_pivots;
      ++consecutive_degenerate_;
      if (rule_ == PivotRule::dantzig &&
          consecutive_degenerate_ >= options_.dantzig_degenerate_fallback)
        rule_ = PivotRule::bland;
      if (rule_ == PivotRule::bland &&
          consecutive_degenerate_ >= 50L * (static_cast<long>(mk_) + n_))
        throw NumericalError(
            "simplex: cycling guard tripped under Bland's rule (" +
            std::to_string(consecutive_degenerate_) +
            " consecutive degenerate pivots); this signals a solver bug or "
            "inconsistent tolerances");
    } else {
      consecutive_degenerate_ = 0;
    }

    if (static_cast<int>(etas_.size()) >= options_.refactor_every) {
      factorize();
      recompute_xB();
    }
  }

  void iterate_to_optimality() {
    std::vector<T> d;
    for (;;) {
      const std::vector<T> y = basic_duals();
      const int enter = choose_entering(y);
      if (enter < 0) return;
      gather_column(enter, d);
      ftran(d);
      const int leave_pos = choose_leaving(d);
      if (leave_pos < 0) {
        if (phase1_)
          throw NumericalError("simplex: unbounded phase-one subproblem");
        unbounded_ = true;
        return;
      }
      pivot(enter, leave_pos, std::move(d));
      d.clear();
    }
  }

  // Pivots basic artificials out where possible; rows that admit no pivot
  // are redundant and get dropped before phase two.
  void cleanup_artificials() {
    std::vector<char> drop(at(mk_), 0);
    for (int p = 0; p < mk_; ++p) {
      if (basis_[at(p)] < n_) continue;
      std::vector<T> w(at(mk_), T(0));
      w[at(p)] = T(1);
      btran(w);  // row p of B^{-1}
      int found = -1;
      for (int j = 0; j < n_; ++j) {
        if (in_basis_[at(j)]) continue;
        if (abs_value(column_dot(w, j)) > options_.tol.pivot) {
          found = j;
          break;
        }
      }
      if (found < 0) {
        drop[at(p)] = 1;
        continue;
      }
      std::vector<T> d;
      gather_column(found, d);
      ftran(d);
      pivot(found, p, std::move(d));
    }

    std::vector<int> new_rows;
    std::vector<int> new_basis;
    for (int p = 0; p < mk_; ++p) {
      if (drop[at(p)]) {
        ++stats_.dropped_rows;
        continue;
      }
      new_rows.push_back(rows_[at(p)]);
      new_basis.push_back(basis_[at(p)]);
    }
    rows_ = std::move(new_rows);
    basis_ = std::move(new_basis);
    mk_ = static_cast<int>(rows_.size());
    if (mk_ == 0) throw NumericalError("simplex: every constraint row is redundant");
    factorize();
    recompute_xB();
  }

  // ----- result assembly -----

  EngineResult<T> make_infeasible() {
    EngineResult<T> r;
    r.status = SolveStatus::infeasible;
    r.stats = stats_;
    const std::vector<T> y = basic_duals();
    r.farkas.assign(at(m_), T(0));
    for (int p = 0; p < mk_; ++p) {
      const int row = rows_[at(p)];
      r.farkas[at(row)] = flip_[at(row)] * y[at(p)];
    }
    return r;
  }

  EngineResult<T> make_result() {
    EngineResult<T> r;
    r.stats = stats_;
    if (unbounded_) {
      r.status = SolveStatus::unbounded;
      return r;
    }
    r.status = SolveStatus::optimal;
    r.x.assign(at(n_), T(0));
    for (int p = 0; p < mk_; ++p) {
      const int j = basis_[at(p)];
      if (j < n_) r.x[at(j)] = xB_[at(p)];
    }
    r.objective = T(0);
    for (int j = 0; j < n_; ++j) r.objective += c_[at(j)] * r.x[at(j)];

    r.basis.assign(at(m_), -1);
    r.duals.assign(at(m_), T(0));
    const std::vector<T> y = basic_duals();
    for (int p = 0; p < mk_; ++p) {
      const int row = rows_[at(p)];
      r.basis[at(row)] = basis_[at(p)];
      r.duals[at(row)] = flip_[at(row)] * y[at(p)];
    }
    r.reduced_costs.assign(at(n_), T(0));
    for (int j = 0; j < n_; ++j) {
      T dot{};
      for (int row = 0; row < m_; ++row) {
        if (r.duals[at(row)] == T(0)) continue;
        dot += r.duals[at(row)] * A_.at(row, j);
      }
      r.reduced_costs[at(j)] = c_[at(j)] - dot;
    }
    return r;
  }

  struct Eta {
    int row;
    std::vector<T> d;
  };

  const ColMatrix<T>& A_;
  std::vector<T> b_;
  std::vector<T> c_;
  std::vector<T> flip_;
  EngineOptions<T> options_;
  int m_;
  int n_;
  T b_scale_{};

  int mk_ = 0;
  std::vector<int> rows_;
  std::vector<int> basis_;
  std::vector<char> in_basis_;
  std::vector<T> xB_;

  std::vector<T> lu_;
  std::vector<int> perm_;
  std::vector<Eta> etas_;

  bool phase1_ = true;
  bool unbounded_ = false;
  PivotRule rule_ = PivotRule::bland;
  long consecutive_degenerate_ = 0;
  SolverStats stats_;
};

}  // namespace mmot::lp::detail
