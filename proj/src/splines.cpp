#include "tvb/splines.hpp"

#include <stdexcept>
#include <string>

namespace tvb {

SplineBasis::SplineBasis(int num_basis, int degree) : num_basis_(num_basis), degree_(degree) {
  if (degree < 0) throw std::invalid_argument("spline degree must be nonnegative");
  if (num_basis < degree + 1)
    throw std::invalid_argument("num_basis=" + std::to_string(num_basis) +
                                " is underdetermined for degree " + std::to_string(degree) +
                                " (need at least degree+1 functions)");

  // degree+1 clamped copies at each end, equidistant interior knots.
  const int n_knots = num_basis + degree + 1;
  const int segments = num_basis - degree;
  knots_.resize(n_knots);
  for (int i = 0; i <= degree; ++i) knots_[i] = 0.0;
  for (int i = 1; i < segments; ++i) knots_[degree + i] = static_cast<double>(i) / segments;
  for (int i = num_basis; i < n_knots; ++i) knots_[i] = 1.0;
}

int SplineBasis::find_span(double x) const {
  // Largest i with knots[i] <= x < knots[i+1]; x = 1 belongs to the last
  // nondegenerate interval.
  if (x >= 1.0) return num_basis_ - 1;
  int lo = degree_;
  int hi = num_basis_;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    (x < knots_[mid] ? hi : lo) = mid;
  }
  return lo;
}

Eigen::VectorXd SplineBasis::eval(double x) const {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::invalid_argument("basis argument " + std::to_string(x) + " outside [0,1]");

  // Triangular recurrence over the degree+1 functions alive on the span.
  const int span = find_span(x);
  Eigen::VectorXd active = Eigen::VectorXd::Zero(degree_ + 1);
  Eigen::VectorXd left(degree_ + 1), right(degree_ + 1);
  active[0] = 1.0;
  for (int j = 1; j <= degree_; ++j) {
    left[j] = x - knots_[span + 1 - j];
    right[j] = knots_[span + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double temp = active[r] / (right[r + 1] + left[j - r]);
      active[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    active[j] = saved;
  }

  Eigen::VectorXd out = Eigen::VectorXd::Zero(num_basis_);
  out.segment(span - degree_, degree_ + 1) = active;
  return out;
}

Eigen::MatrixXd SplineBasis::rows_at(const Eigen::VectorXd& xs) const {
  Eigen::MatrixXd rows(xs.size(), num_basis_);
  for (Eigen::Index i = 0; i < xs.size(); ++i) rows.row(i) = eval(xs[i]).transpose();
  return rows;
}

}  // namespace tvb
