#pragma once

// Deterministic predicates on finitely generated cones in R^d. Every
// simulation in the library reduces to these: strict separation from the
// origin, k-face tests, membership, and intersection with a subspace.
// Inputs are assumed to be in general position; near-ties raise
// DegenerateInput instead of being resolved arbitrarily.

#include <Eigen/Dense>

#include <span>

namespace conic {

inline constexpr double kStrictTol = 1e-9;
inline constexpr double kResidualTol = 1e-9;
inline constexpr double kRankTol = 1e-9;

/// Orthonormal basis (columns) of the orthogonal complement of the span of
/// the columns of `vectors`. Numerical rank is taken against the largest
/// singular value with relative threshold `rel_tol`.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> complement_basis(
    const Eigen::MatrixBase<Derived>& vectors, typename Derived::Scalar rel_tol = kRankTol) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index d = vectors.rows();
  if (vectors.cols() == 0) return Matrix::Identity(d, d);
  Eigen::JacobiSVD<Matrix> svd(vectors, Eigen::ComputeFullU);
  const auto& sigma = svd.singularValues();
  Eigen::Index rank = 0;
  if (sigma.size() > 0 && sigma(0) > Scalar(0)) {
    while (rank < sigma.size() && sigma(rank) > rel_tol * sigma(0)) ++rank;
  }
  return svd.matrixU().rightCols(d - rank);
}

/// Generators of a cone: `dimension() x size()` matrix of unit columns.
class PointSet {
 public:
  /// Columns are normalised; zero or non-finite columns raise DomainError.
  explicit PointSet(Eigen::MatrixXd points);

  Eigen::Index dimension() const { return points_.rows(); }
  Eigen::Index size() const { return points_.cols(); }
  const Eigen::MatrixXd& points() const { return points_; }
  auto point(Eigen::Index i) const { return points_.col(i); }

 private:
  Eigen::MatrixXd points_;
};

/// Orthonormal basis of a linear subspace of R^d.
class SubspaceBasis {
 public:
  /// `basis` must have orthonormal columns (within 1e-10).
  explicit SubspaceBasis(Eigen::MatrixXd basis);
  SubspaceBasis(Eigen::Index ambient_dimension, Eigen::MatrixXd basis);

  Eigen::Index ambient_dimension() const { return ambient_; }
  Eigen::Index dimension() const { return basis_.cols(); }
  const Eigen::MatrixXd& basis() const { return basis_; }

 private:
  Eigen::Index ambient_;
  Eigen::MatrixXd basis_;
};

SubspaceBasis orthonormal_complement(const Eigen::MatrixXd& vectors);

/// True iff some u has <u, p> < 0 for every point p, i.e. the points lie in
/// an open halfspace and their positive hull is not R^d.
bool strict_halfspace_feasible(const PointSet& points);

/// True iff the positive hull of the indexed generators is a k-face of the
/// cone spanned by all of them (k = subset size).
bool is_face(const PointSet& points, std::span<const int> subset);

/// True iff y is a nonnegative combination of the generators.
bool cone_contains(const PointSet& points, const Eigen::VectorXd& y);

/// True iff the cone meets the subspace outside the origin.
bool cone_meets_subspace(const PointSet& points, const SubspaceBasis& subspace);

}  // namespace conic
