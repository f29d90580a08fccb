#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "cslab/errors.hpp"
#include "cslab/linalg.hpp"

namespace cslab {

/// The solver's tolerance ladder. Every downstream module that needs an
/// LP-level tolerance references these rather than re-inventing its own.
namespace lp_tolerances {
inline constexpr double kFeasibility = 1e-8;   // primal residual, scaled by 1+||b||_inf
inline constexpr double kReducedCost = 1e-8;
inline constexpr double kPivot = 1e-11;
} // namespace lp_tolerances

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit, NumericalBreakdown };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration_limit";
    case LpStatus::NumericalBreakdown: return "numerical_breakdown";
  }
  return "?";
}

/// min c.x  subject to  M x = b, x >= 0.
struct LinearProgram {
  Matrix constraints;            // M, rows x cols
  Vector rhs;                    // b
  Vector objective;              // c
  std::vector<std::string> labels;  // optional per-column names for dumps

  std::size_t rows() const { return constraints.rows(); }
  std::size_t cols() const { return constraints.cols(); }

  void validate() const {
    if (rhs.size() != rows() || objective.size() != cols())
      throw std::invalid_argument("LinearProgram: inconsistent dimensions");
    for (double v : rhs)
      if (!std::isfinite(v)) throw std::invalid_argument("LinearProgram: rhs not finite");
  }
};

struct LpSolution {
  LpStatus status = LpStatus::NumericalBreakdown;
  Vector x;
  double objective = 0.0;
  int iterations = 0;
  double max_primal_residual = 0.0;
};

namespace detail {

/// Two-phase revised simplex with Bland's rule, a dense basis inverse
/// maintained by eta updates, and a full refactorization every 50 pivots.
/// Entirely deterministic: fixed scan orders, no randomization.
class SimplexSolver {
public:
  explicit SimplexSolver(const LinearProgram& lp)
      : lp_(lp), r_(lp.rows()), nc_(lp.cols()), total_(nc_ + r_) {
    row_sign_.assign(r_, 1.0);
    b_.assign(lp.rhs.begin(), lp.rhs.end());
    for (std::size_t i = 0; i < r_; ++i)
      if (b_[i] < 0.0) {
        b_[i] = -b_[i];
        row_sign_[i] = -1.0;
      }
    active_.resize(r_);
    std::iota(active_.begin(), active_.end(), std::size_t{0});
    b_inf_ = 0.0;
    for (double v : lp.rhs) b_inf_ = std::max(b_inf_, std::abs(v));
    iteration_cap_ = 50 * static_cast<long>(r_ + total_);
  }

  LpSolution solve() {
    LpSolution sol;
    if (r_ == 0) return solve_unconstrained();

    basic_.resize(r_);
    is_basic_.assign(total_, false);
    for (std::size_t i = 0; i < r_; ++i) {
      basic_[i] = nc_ + i;
      is_basic_[nc_ + i] = true;
    }
    binv_ = Matrix::identity(r_);
    xb_ = b_;

    // Phase 1: minimize the sum of artificials.
    LpStatus st = iterate(/*phase1=*/true);
    if (st == LpStatus::Unbounded) st = LpStatus::NumericalBreakdown;  // cannot happen exactly
    if (st != LpStatus::Optimal) return finish(st);

    if (artificial_sum() > lp_tolerances::kFeasibility * (1.0 + b_inf_))
      return finish(LpStatus::Infeasible);

    drive_out_artificials();
    if (!drop_redundant_rows()) return finish(LpStatus::NumericalBreakdown);

    st = iterate(/*phase1=*/false);
    return finish(st);
  }

private:
  LpSolution solve_unconstrained() const {
    LpSolution sol;
    sol.x.assign(nc_, 0.0);
    for (double cj : lp_.objective)
      if (cj < -lp_tolerances::kReducedCost) {
        sol.status = LpStatus::Unbounded;
        return sol;
      }
    sol.status = LpStatus::Optimal;
    sol.objective = 0.0;
    return sol;
  }

  // Column j of the phase-1 work matrix [S*M | I], where S flips rows
  // with negative rhs. Row indices go through active_, which shrinks
  // when redundant rows are dropped after phase 1; artificial k belongs
  // to original row k.
  double entry(std::size_t i, std::size_t j) const {
    const std::size_t row = active_[i];
    if (j < nc_) return row_sign_[row] * lp_.constraints(row, j);
    return j - nc_ == row ? 1.0 : 0.0;
  }

  double rhs_of(std::size_t i) const { return b_[active_[i]]; }

  double artificial_sum() const {
    double s = 0.0;
    for (std::size_t i = 0; i < r_; ++i)
      if (basic_[i] >= nc_) s += std::max(xb_[i], 0.0);
    return s;
  }

  double cost(std::size_t j, bool phase1) const {
    if (phase1) return j < nc_ ? 0.0 : 1.0;
    return j < nc_ ? lp_.objective[j] : 0.0;
  }

  Vector binv_times_column(std::size_t j) const {
    Vector w(r_, 0.0);
    for (std::size_t k = 0; k < r_; ++k) {
      const double a = entry(k, j);
      if (a == 0.0) continue;
      for (std::size_t i = 0; i < r_; ++i) w[i] += binv_(i, k) * a;
    }
    return w;
  }

  LpStatus iterate(bool phase1) {
    const std::size_t scan_limit = phase1 ? total_ : nc_;
    for (;;) {
      if (iterations_ >= iteration_cap_) return LpStatus::IterationLimit;
      // Phase 1 only needs the artificial mass numerically gone, not a
      // proved optimum; stopping early skips long degenerate tails on
      // rank-deficient systems.
      if (phase1 && artificial_sum() <= 1e-2 * lp_tolerances::kFeasibility * (1.0 + b_inf_))
        return LpStatus::Optimal;

      // y = c_B^T Binv
      Vector y(r_, 0.0);
      for (std::size_t i = 0; i < r_; ++i) {
        const double cb = cost(basic_[i], phase1);
        if (cb == 0.0) continue;
        for (std::size_t k = 0; k < r_; ++k) y[k] += cb * binv_(i, k);
      }

      // Bland: first column (smallest index) with negative reduced cost.
      std::size_t entering = total_;
      for (std::size_t j = 0; j < scan_limit; ++j) {
        if (is_basic_[j]) continue;
        if (!phase1 && j >= nc_) break;
        double d = cost(j, phase1);
        for (std::size_t i = 0; i < r_; ++i) d -= y[i] * entry(i, j);
        if (d < -lp_tolerances::kReducedCost) {
          entering = j;
          break;
        }
      }
      if (entering == total_) return LpStatus::Optimal;

      const Vector w = binv_times_column(entering);

      // Ratio test; ties resolved toward the smallest basic variable index.
      std::size_t leave_pos = r_;
      double best_ratio = 0.0;
      for (std::size_t i = 0; i < r_; ++i) {
        if (w[i] <= lp_tolerances::kPivot) continue;
        const double ratio = std::max(xb_[i], 0.0) / w[i];
        if (leave_pos == r_ || ratio < best_ratio - 1e-15 ||
            (std::abs(ratio - best_ratio) <= 1e-15 && basic_[i] < basic_[leave_pos])) {
          leave_pos = i;
          best_ratio = ratio;
        }
      }
      if (leave_pos == r_) return LpStatus::Unbounded;

      pivot(entering, leave_pos, w, best_ratio);
      ++iterations_;
      if (++pivots_since_refactor_ >= 50) {
        if (!refactor()) return LpStatus::NumericalBreakdown;
      }
    }
  }

  void pivot(std::size_t entering, std::size_t leave_pos, const Vector& w, double step) {
    for (std::size_t i = 0; i < r_; ++i) xb_[i] -= step * w[i];
    xb_[leave_pos] = step;
    is_basic_[basic_[leave_pos]] = false;
    is_basic_[entering] = true;
    basic_[leave_pos] = entering;

    const double piv = w[leave_pos];
    for (std::size_t k = 0; k < r_; ++k) binv_(leave_pos, k) /= piv;
    for (std::size_t i = 0; i < r_; ++i) {
      if (i == leave_pos || w[i] == 0.0) continue;
      const double f = w[i];
      for (std::size_t k = 0; k < r_; ++k) binv_(i, k) -= f * binv_(leave_pos, k);
    }
  }

  /// Rebuild Binv from scratch (Gauss-Jordan with partial pivoting) and
  /// recompute x_B = Binv b to shed accumulated eta-update drift.
  bool refactor() {
    pivots_since_refactor_ = 0;
    binv_ = Matrix(r_, r_);
    Matrix work(r_, 2 * r_);
    for (std::size_t i = 0; i < r_; ++i) {
      for (std::size_t k = 0; k < r_; ++k) work(i, k) = entry(i, basic_[k]);
      work(i, r_ + i) = 1.0;
    }
    for (std::size_t col = 0; col < r_; ++col) {
      std::size_t piv = col;
      for (std::size_t i = col + 1; i < r_; ++i)
        if (std::abs(work(i, col)) > std::abs(work(piv, col))) piv = i;
      if (std::abs(work(piv, col)) < lp_tolerances::kPivot) return false;
      if (piv != col)
        for (std::size_t k = 0; k < 2 * r_; ++k) std::swap(work(piv, k), work(col, k));
      const double d = work(col, col);
      for (std::size_t k = 0; k < 2 * r_; ++k) work(col, k) /= d;
      for (std::size_t i = 0; i < r_; ++i) {
        if (i == col) continue;
        const double f = work(i, col);
        if (f == 0.0) continue;
        for (std::size_t k = 0; k < 2 * r_; ++k) work(i, k) -= f * work(col, k);
      }
    }
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t k = 0; k < r_; ++k) binv_(i, k) = work(i, r_ + k);
    xb_.assign(r_, 0.0);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t k = 0; k < r_; ++k) xb_[i] += binv_(i, k) * rhs_of(k);
    return true;
  }

  /// After a feasible phase 1, pivot basic artificials (all at value ~0)
  /// out of the basis wherever an original column admits a usable pivot.
  /// Rows where none does are redundant; drop_redundant_rows removes them.
  void drive_out_artificials() {
    for (std::size_t pos = 0; pos < r_; ++pos) {
      if (basic_[pos] < nc_) continue;
      // row pos of Binv * A over original columns; pick the strongest pivot
      Vector brow(r_);
      for (std::size_t k = 0; k < r_; ++k) brow[k] = binv_(pos, k);
      std::size_t found = total_;
      double best = lp_tolerances::kPivot;
      for (std::size_t j = 0; j < nc_; ++j) {
        if (is_basic_[j]) continue;
        double v = 0.0;
        for (std::size_t k = 0; k < r_; ++k) v += brow[k] * entry(k, j);
        if (std::abs(v) > best) {
          best = std::abs(v);
          found = j;
        }
      }
      if (found == total_) continue;  // redundant row
      // Degenerate pivot: the artificial sits at zero, so the step is zero.
      const Vector w = binv_times_column(found);
      is_basic_[basic_[pos]] = false;
      is_basic_[found] = true;
      basic_[pos] = found;
      const double piv = w[pos];
      for (std::size_t k = 0; k < r_; ++k) binv_(pos, k) /= piv;
      for (std::size_t i = 0; i < r_; ++i) {
        if (i == pos || w[i] == 0.0) continue;
        const double f = w[i];
        for (std::size_t k = 0; k < r_; ++k) binv_(i, k) -= f * binv_(pos, k);
      }
      xb_[pos] = 0.0;
    }
  }

  /// Remove every row still carrying a basic artificial: those rows are
  /// linear combinations of the kept ones (phase 1 left them at zero), so
  /// the problem is unchanged and phase 2 runs on a full-rank system.
  bool drop_redundant_rows() {
    std::vector<std::size_t> keep_active, keep_basic;
    for (std::size_t i = 0; i < r_; ++i) {
      if (basic_[i] >= nc_) continue;
      keep_active.push_back(active_[i]);
      keep_basic.push_back(basic_[i]);
    }
    if (keep_active.size() == r_) return true;
    active_ = std::move(keep_active);
    r_ = active_.size();
    basic_ = std::move(keep_basic);
    std::fill(is_basic_.begin() + nc_, is_basic_.end(), false);
    xb_.assign(r_, 0.0);
    if (r_ == 0) return true;
    return refactor();
  }

  LpSolution finish(LpStatus st) {
    LpSolution sol;
    sol.status = st;
    sol.iterations = static_cast<int>(iterations_);
    sol.x.assign(nc_, 0.0);
    if (st != LpStatus::Optimal) return sol;
    for (std::size_t i = 0; i < r_; ++i)
      if (basic_[i] < nc_) sol.x[basic_[i]] = xb_[i];
    double obj = 0.0;
    for (std::size_t j = 0; j < nc_; ++j) obj += lp_.objective[j] * sol.x[j];
    sol.objective = obj;
    // residual over every original row, dropped ones included
    double res = 0.0;
    for (std::size_t i = 0; i < lp_.rows(); ++i) {
      double ax = 0.0;
      for (std::size_t j = 0; j < nc_; ++j) ax += lp_.constraints(i, j) * sol.x[j];
      res = std::max(res, std::abs(ax - lp_.rhs[i]));
    }
    sol.max_primal_residual = res;
    return sol;
  }

  const LinearProgram& lp_;
  std::size_t r_, nc_, total_;
  Vector row_sign_, b_;
  std::vector<std::size_t> active_;  // surviving row indices, in order
  double b_inf_ = 0.0;
  long iteration_cap_ = 0;
  long iterations_ = 0;
  int pivots_since_refactor_ = 0;

  std::vector<std::size_t> basic_;
  std::vector<bool> is_basic_;
  Matrix binv_;
  Vector xb_;
};

} // namespace detail

/// Deterministic two-phase revised simplex on standard form. Budget
/// guard: rows <= 2000, columns <= 5000.
inline LpSolution solve_lp(const LinearProgram& lp) {
  lp.validate();
  if (lp.rows() > 2000)
    throw BudgetError("solve_lp: row budget exceeded", static_cast<double>(lp.rows()), 2000);
  if (lp.cols() > 5000)
    throw BudgetError("solve_lp: column budget exceeded", static_cast<double>(lp.cols()), 5000);
  detail::SimplexSolver solver(lp);
  return solver.solve();
}

/// Same, but variables flagged in is_free may take any sign; each is
/// split into a difference of two nonnegative variables, and the returned
/// point is recombined into the caller's coordinates.
inline LpSolution solve_lp_free(const LinearProgram& lp, const std::vector<bool>& is_free) {
  lp.validate();
  if (is_free.size() != lp.cols())
    throw std::invalid_argument("solve_lp_free: is_free size mismatch");

  std::size_t extra = 0;
  for (bool f : is_free) extra += f ? 1 : 0;

  LinearProgram split;
  split.constraints = Matrix(lp.rows(), lp.cols() + extra);
  split.rhs = lp.rhs;
  split.objective.assign(lp.cols() + extra, 0.0);
  std::vector<std::size_t> neg_col(lp.cols(), 0);
  std::size_t next = lp.cols();
  for (std::size_t j = 0; j < lp.cols(); ++j) {
    split.objective[j] = lp.objective[j];
    for (std::size_t i = 0; i < lp.rows(); ++i) split.constraints(i, j) = lp.constraints(i, j);
    if (is_free[j]) {
      neg_col[j] = next;
      split.objective[next] = -lp.objective[j];
      for (std::size_t i = 0; i < lp.rows(); ++i)
        split.constraints(i, next) = -lp.constraints(i, j);
      ++next;
    }
  }

  LpSolution inner = solve_lp(split);
  LpSolution sol;
  sol.status = inner.status;
  sol.iterations = inner.iterations;
  sol.x.assign(lp.cols(), 0.0);
  if (inner.status != LpStatus::Optimal) return sol;
  for (std::size_t j = 0; j < lp.cols(); ++j)
    sol.x[j] = is_free[j] ? inner.x[j] - inner.x[neg_col[j]] : inner.x[j];
  double obj = 0.0;
  for (std::size_t j = 0; j < lp.cols(); ++j) obj += lp.objective[j] * sol.x[j];
  sol.objective = obj;
  double res = 0.0;
  for (std::size_t i = 0; i < lp.rows(); ++i) {
    double ax = 0.0;
    for (std::size_t j = 0; j < lp.cols(); ++j) ax += lp.constraints(i, j) * sol.x[j];
    res = std::max(res, std::abs(ax - lp.rhs[i]));
  }
  sol.max_primal_residual = res;
  return sol;
}

} // namespace cslab
