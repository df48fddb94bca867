#include "conic/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "conic/error.hpp"
#include "conic/simplex.hpp"

namespace conic {

namespace {

constexpr double kMinProjectedNorm = 1e-12;

using Lp = LinearProgram<double>;

LpSolution<double> solve_checked(const Lp& lp) {
  auto sol = solve(lp);
  if (sol.status == LpStatus::unbounded) throw SolverError("bounded LP reported unbounded");
  return sol;
}

// Feasibility of { lambda >= 0 : M lambda = rhs }, up to kResidualTol in L1.
bool nonnegative_solution_exists(const Eigen::MatrixXd& M, const Eigen::VectorXd& rhs) {
  Lp lp;
  lp.A = M;
  lp.b = rhs;
  lp.sense.assign(static_cast<std::size_t>(M.rows()), RowSense::equal);
  lp.objective = Eigen::VectorXd::Zero(M.cols());
  lp.lower = Eigen::VectorXd::Zero(M.cols());
  lp.upper = Eigen::VectorXd::Constant(M.cols(), std::numeric_limits<double>::infinity());
  SimplexOptions opts;
  opts.feasibility_tol = kResidualTol;
  return solve(lp, opts).status == LpStatus::optimal;
}

}  // namespace

PointSet::PointSet(Eigen::MatrixXd points) : points_(std::move(points)) {
  if (points_.rows() < 1) throw DomainError("point set needs positive dimension");
  if (!points_.allFinite()) throw DomainError("point set has non-finite coordinates");
  for (Eigen::Index j = 0; j < points_.cols(); ++j) {
    const double norm = points_.col(j).norm();
    if (norm == 0.0) throw DomainError("point set contains the zero vector");
    points_.col(j) /= norm;
  }
}

SubspaceBasis::SubspaceBasis(Eigen::MatrixXd basis) : SubspaceBasis(basis.rows(), basis) {}

SubspaceBasis::SubspaceBasis(Eigen::Index ambient_dimension, Eigen::MatrixXd basis)
    : ambient_(ambient_dimension), basis_(std::move(basis)) {
  if (basis_.cols() == 0) {
    basis_.resize(ambient_, 0);
    return;
  }
  if (basis_.rows() != ambient_) throw DomainError("subspace basis has the wrong ambient dimension");
  const Eigen::MatrixXd gram = basis_.transpose() * basis_;
  if ((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() > 1e-10) {
    throw DomainError("subspace basis is not orthonormal");
  }
}

SubspaceBasis orthonormal_complement(const Eigen::MatrixXd& vectors) {
  return SubspaceBasis(vectors.rows(), complement_basis(vectors));
}

bool strict_halfspace_feasible(const PointSet& points) {
  const Eigen::Index d = points.dimension();
  const Eigen::Index n = points.size();
  if (n == 0) throw DomainError("strict_halfspace_feasible needs a nonempty point set");

  // maximize t  s.t.  <u, p_j> + t <= 0,  -1 <= u_i <= 1.
  const double t_range = std::sqrt(static_cast<double>(d)) + 1.0;
  Lp margin;
  margin.A.resize(n, d + 1);
  margin.A.leftCols(d) = points.points().transpose();
  margin.A.col(d).setOnes();
  margin.b = Eigen::VectorXd::Zero(n);
  margin.sense.assign(static_cast<std::size_t>(n), RowSense::less_equal);
  margin.objective = Eigen::VectorXd::Zero(d + 1);
  margin.objective(d) = 1.0;
  margin.lower = Eigen::VectorXd::Constant(d + 1, -1.0);
  margin.lower(d) = -t_range;
  margin.upper = Eigen::VectorXd::Constant(d + 1, 1.0);
  margin.upper(d) = t_range;
  const double t_star = solve_checked(margin).objective;
  if (t_star > kStrictTol) return true;

  // Zero margin. Generic points then positively span R^d, so no nonzero u
  // has <u, p_j> <= 0 for all j. Any weak separator means the points sit in
  // a closed but not an open halfspace (or a hyperplane).
  Lp weak;
  weak.A = points.points().transpose();
  weak.b = Eigen::VectorXd::Zero(n);
  weak.sense.assign(static_cast<std::size_t>(n), RowSense::less_equal);
  weak.objective = -points.points().rowwise().sum();
  weak.lower = Eigen::VectorXd::Constant(d, -1.0);
  weak.upper = Eigen::VectorXd::Constant(d, 1.0);
  const auto sol = solve_checked(weak);
  if (sol.status != LpStatus::optimal) throw SolverError("weak separation LP infeasible");
  const bool flat = complement_basis(points.points()).cols() > 0;
  if (flat || sol.objective > kStrictTol || t_star > 1e-12) {
    throw DegenerateInput("points lie in a closed halfspace with margin " + std::to_string(t_star) +
                          "; not in general position");
  }
  return false;
}

bool is_face(const PointSet& points, std::span<const int> subset) {
  const Eigen::Index d = points.dimension();
  const Eigen::Index n = points.size();
  const auto k = static_cast<Eigen::Index>(subset.size());
  if (k < 1 || k > d) throw DomainError("is_face requires 1 <= |subset| <= d");

  std::vector<bool> chosen(static_cast<std::size_t>(n), false);
  Eigen::MatrixXd span(d, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const int idx = subset[static_cast<std::size_t>(j)];
    if (idx < 0 || idx >= n) throw DomainError("is_face: index out of range");
    if (chosen[static_cast<std::size_t>(idx)]) throw DomainError("is_face: repeated index");
    chosen[static_cast<std::size_t>(idx)] = true;
    span.col(j) = points.point(idx);
  }

  const Eigen::MatrixXd complement = complement_basis(span);
  if (complement.cols() != d - k) return false;  // rank-deficient subset
  if (n == k) return true;
  if (k == d) return false;  // the rest would have to vanish

  Eigen::MatrixXd projected(d - k, n - k);
  Eigen::Index col = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (chosen[static_cast<std::size_t>(j)]) continue;
    projected.col(col) = complement.transpose() * points.point(j);
    if (projected.col(col).norm() < kMinProjectedNorm) {
      throw DegenerateInput("is_face: generator lies in the span of the candidate face");
    }
    ++col;
  }
  return strict_halfspace_feasible(PointSet(std::move(projected)));
}

bool cone_contains(const PointSet& points, const Eigen::VectorXd& y) {
  if (points.size() == 0) throw DomainError("cone_contains needs a nonempty point set");
  if (y.size() != points.dimension()) throw DomainError("cone_contains: dimension mismatch");
  if (!y.allFinite()) throw DomainError("cone_contains: non-finite query");
  const double norm = y.norm();
  if (norm == 0.0) return true;
  return nonnegative_solution_exists(points.points(), y / norm);
}

bool cone_meets_subspace(const PointSet& points, const SubspaceBasis& subspace) {
  const Eigen::Index d = points.dimension();
  if (points.size() == 0) throw DomainError("cone_meets_subspace needs a nonempty point set");
  if (subspace.ambient_dimension() != d) throw DomainError("cone_meets_subspace: dimension mismatch");
  if (subspace.dimension() < 1) throw DomainError("cone_meets_subspace needs dim L >= 1");
  if (subspace.dimension() == d) return true;

  // lambda >= 0, sum lambda = 1, Q^T P lambda = 0 with Q spanning L^perp.
  const Eigen::MatrixXd normal = complement_basis(subspace.basis());
  Eigen::MatrixXd M(normal.cols() + 1, points.size());
  M.topRows(normal.cols()) = normal.transpose() * points.points();
  M.bottomRows(1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(M.rows());
  rhs(M.rows() - 1) = 1.0;
  return nonnegative_solution_exists(M, rhs);
}

}  // namespace conic
