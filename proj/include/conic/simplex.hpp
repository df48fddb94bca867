#pragma once

// Dense bounded-variable primal simplex with Bland's anti-cycling rule.
//
// Solves   maximize  c^T x
//          subject to A_i x <= b_i  or  A_i x == b_i   (per row)
//                     lower <= x <= upper             (lower finite)
//
// Problems here are tiny (tens of rows and columns), so the whole tableau
// B^{-1} [A | slacks | artificials] is kept explicitly and reduced costs are
// recomputed every iteration.

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "conic/error.hpp"

namespace conic {

enum class RowSense { less_equal, equal };

template <typename Scalar = double>
struct LinearProgram {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Matrix A;
  Vector b;
  std::vector<RowSense> sense;
  Vector objective;
  Vector lower;
  Vector upper;
};

enum class LpStatus { optimal, infeasible, unbounded };

template <typename Scalar = double>
struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Scalar objective = 0;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
  /// Phase-one optimum: total artificial mass left, 0 when feasible.
  Scalar infeasibility = 0;
  int iterations = 0;
};

struct SimplexOptions {
  double feasibility_tol = 1e-9;
  double pivot_tol = 1e-10;
  double cost_tol = 1e-11;
  int max_iterations = 20000;
};

namespace detail {

template <typename Scalar>
class BoundedTableau {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BoundedTableau(Matrix tableau, Vector upper, std::vector<int> basis, Vector values,
                 const SimplexOptions& opts)
      : t_(std::move(tableau)),
        upper_(std::move(upper)),
        basis_(std::move(basis)),
        value_(std::move(values)),
        at_upper_(static_cast<std::size_t>(t_.cols()), false),
        is_basic_(static_cast<std::size_t>(t_.cols()), false),
        opts_(opts) {
    for (int j : basis_) is_basic_[static_cast<std::size_t>(j)] = true;
  }

  /// Runs primal simplex for `cost`; returns false if unbounded.
  bool optimize(const Vector& cost, int& iterations) {
    const Eigen::Index m = t_.rows();
    const Eigen::Index n = t_.cols();
    for (;;) {
      if (++iterations > opts_.max_iterations) {
        throw SolverError("simplex iteration cap (" + std::to_string(opts_.max_iterations) + ") exceeded");
      }

      // Bland: lowest-index improving nonbasic column.
      Eigen::Index entering = -1;
      int direction = 0;
      for (Eigen::Index j = 0; j < n && entering < 0; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        if (is_basic_[ju] || upper_(j) <= Scalar(0)) continue;
        Scalar reduced = cost(j);
        for (Eigen::Index i = 0; i < m; ++i) reduced -= cost(basis_[static_cast<std::size_t>(i)]) * t_(i, j);
        if (!at_upper_[ju] && reduced > Scalar(opts_.cost_tol)) {
          entering = j;
          direction = 1;
        } else if (at_upper_[ju] && reduced < -Scalar(opts_.cost_tol)) {
          entering = j;
          direction = -1;
        }
      }
      if (entering < 0) return true;

      // Ratio test; ties go to the lowest-index basic variable.
      Scalar step = upper_(entering);
      Eigen::Index leaving_row = -1;
      int leaving_var = std::numeric_limits<int>::max();
      for (Eigen::Index i = 0; i < m; ++i) {
        const Scalar rate = Scalar(direction) * t_(i, entering);
        const int var = basis_[static_cast<std::size_t>(i)];
        Scalar limit;
        if (rate > Scalar(opts_.pivot_tol)) {
          limit = std::max(Scalar(0), value_(var)) / rate;
        } else if (rate < -Scalar(opts_.pivot_tol) && std::isfinite(upper_(var))) {
          limit = std::max(Scalar(0), upper_(var) - value_(var)) / -rate;
        } else {
          continue;
        }
        if (limit < step || (limit == step && leaving_row >= 0 && var < leaving_var)) {
          step = limit;
          leaving_row = i;
          leaving_var = var;
        }
      }
      if (!std::isfinite(step)) return false;

      for (Eigen::Index i = 0; i < m; ++i) {
        value_(basis_[static_cast<std::size_t>(i)]) -= step * Scalar(direction) * t_(i, entering);
      }
      value_(entering) += Scalar(direction) * step;

      if (leaving_row < 0) {
        // Bound flip.
        at_upper_[static_cast<std::size_t>(entering)] = direction > 0;
        value_(entering) = direction > 0 ? upper_(entering) : Scalar(0);
        continue;
      }

      const int leaving = basis_[static_cast<std::size_t>(leaving_row)];
      const Scalar rate = Scalar(direction) * t_(leaving_row, entering);
      const bool to_upper = rate < Scalar(0);
      value_(leaving) = to_upper ? upper_(leaving) : Scalar(0);
      at_upper_[static_cast<std::size_t>(leaving)] = to_upper;
      is_basic_[static_cast<std::size_t>(leaving)] = false;
      is_basic_[static_cast<std::size_t>(entering)] = true;
      at_upper_[static_cast<std::size_t>(entering)] = false;
      basis_[static_cast<std::size_t>(leaving_row)] = static_cast<int>(entering);

      t_.row(leaving_row) /= t_(leaving_row, entering);
      for (Eigen::Index i = 0; i < m; ++i) {
        if (i == leaving_row) continue;
        const Scalar factor = t_(i, entering);
        if (factor != Scalar(0)) t_.row(i) -= factor * t_.row(leaving_row);
      }
    }
  }

  /// Pins column j to zero (used to retire artificials after phase one).
  void fix_at_zero(Eigen::Index j) {
    upper_(j) = Scalar(0);
    if (!is_basic_[static_cast<std::size_t>(j)]) {
      at_upper_[static_cast<std::size_t>(j)] = false;
      value_(j) = Scalar(0);
    }
  }

  const Vector& values() const { return value_; }

 private:
  Matrix t_;
  Vector upper_;
  std::vector<int> basis_;
  Vector value_;
  std::vector<bool> at_upper_;
  std::vector<bool> is_basic_;
  SimplexOptions opts_;
};

}  // namespace detail

template <typename Scalar>
LpSolution<Scalar> solve(const LinearProgram<Scalar>& lp, const SimplexOptions& opts = {}) {
  using Matrix = typename LinearProgram<Scalar>::Matrix;
  using Vector = typename LinearProgram<Scalar>::Vector;

  const Eigen::Index m = lp.A.rows();
  const Eigen::Index n = lp.A.cols();
  if (lp.b.size() != m || lp.objective.size() != n || lp.lower.size() != n || lp.upper.size() != n ||
      static_cast<Eigen::Index>(lp.sense.size()) != m) {
    throw DomainError("linear program dimensions are inconsistent");
  }
  if (!lp.lower.allFinite()) throw DomainError("linear program lower bounds must be finite");
  if ((lp.upper.array() < lp.lower.array()).any()) throw DomainError("linear program has an empty box");

  // Shift to 0 <= y <= upper - lower.
  const Vector rhs = lp.b - lp.A * lp.lower;

  Eigen::Index slack_count = 0;
  for (RowSense s : lp.sense) slack_count += (s == RowSense::less_equal);
  std::vector<bool> needs_artificial(static_cast<std::size_t>(m));
  Eigen::Index artificial_count = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const bool need = lp.sense[static_cast<std::size_t>(i)] == RowSense::equal || rhs(i) < Scalar(0);
    needs_artificial[static_cast<std::size_t>(i)] = need;
    artificial_count += need;
  }

  const Eigen::Index cols = n + slack_count + artificial_count;
  Matrix tableau = Matrix::Zero(m, cols);
  Vector upper = Vector::Constant(cols, std::numeric_limits<Scalar>::infinity());
  upper.head(n) = lp.upper - lp.lower;
  Vector values = Vector::Zero(cols);
  std::vector<int> basis(static_cast<std::size_t>(m));

  Eigen::Index next_slack = n;
  Eigen::Index next_artificial = n + slack_count;
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    const Scalar sign = rhs(i) < Scalar(0) ? Scalar(-1) : Scalar(1);
    tableau.row(i).head(n) = sign * lp.A.row(i);
    if (lp.sense[iu] == RowSense::less_equal) {
      tableau(i, next_slack) = sign;
      if (!needs_artificial[iu]) basis[iu] = static_cast<int>(next_slack);
      ++next_slack;
    }
    if (needs_artificial[iu]) {
      tableau(i, next_artificial) = Scalar(1);
      basis[iu] = static_cast<int>(next_artificial);
      ++next_artificial;
    }
    values(basis[iu]) = sign * rhs(i);
  }

  detail::BoundedTableau<Scalar> tab(std::move(tableau), std::move(upper), std::move(basis), std::move(values), opts);
  LpSolution<Scalar> out;

  if (artificial_count > 0) {
    Vector phase_one = Vector::Zero(cols);
    phase_one.tail(artificial_count).setConstant(Scalar(-1));
    tab.optimize(phase_one, out.iterations);
    out.infeasibility = tab.values().tail(artificial_count).sum();
    if (out.infeasibility > Scalar(opts.feasibility_tol)) {
      out.status = LpStatus::infeasible;
      out.x = lp.lower + tab.values().head(n);
      return out;
    }
    for (Eigen::Index j = n + slack_count; j < cols; ++j) tab.fix_at_zero(j);
  }

  Vector cost = Vector::Zero(cols);
  cost.head(n) = lp.objective;
  if (!tab.optimize(cost, out.iterations)) {
    out.status = LpStatus::unbounded;
    return out;
  }
  out.status = LpStatus::optimal;
  out.x = lp.lower + tab.values().head(n);
  out.objective = lp.objective.dot(out.x);
  return out;
}

}  // namespace conic
