#pragma once

#include <Eigen/Core>

namespace tvb {

/// Clamped equidistant B-spline basis on [0,1].
///
/// The knot vector carries degree+1 copies of 0 and of 1 with equidistant
/// interior knots, so the num_basis functions form a partition of unity and
/// each point is covered by at most degree+1 of them. Immutable after
/// construction; safe to share across threads.
class SplineBasis {
 public:
  SplineBasis(int num_basis, int degree = 3);

  int num_basis() const { return num_basis_; }
  int degree() const { return degree_; }
  const Eigen::VectorXd& knots() const { return knots_; }

  /// All basis values at x in [0,1]; x = 1 evaluates on the closure of the
  /// final interval so the last function reaches 1 there.
  Eigen::VectorXd eval(double x) const;

  /// Stacked eval() rows, one per grid point. Used to precompute the basis
  /// over an observation grid once per fit.
  Eigen::MatrixXd rows_at(const Eigen::VectorXd& xs) const;

 private:
  int find_span(double x) const;

  int num_basis_ = 0;
  int degree_ = 0;
  Eigen::VectorXd knots_;
};

inline SplineBasis build_basis(int num_basis, int degree = 3) { return SplineBasis(num_basis, degree); }

inline Eigen::VectorXd eval_basis(const SplineBasis& basis, double x) { return basis.eval(x); }

}  // namespace tvb
