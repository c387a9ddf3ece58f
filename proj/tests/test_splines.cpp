#include <doctest.h>

#include <random>
#include <vector>

#include "tvb/splines.hpp"

namespace {

// Literal Cox-de Boor recursion, independent of the production evaluator.
// Degree-0 functions are indicators of half-open knot spans, except that the
// last nonempty span is closed so x=1 is covered.
double cox_de_boor(const Eigen::VectorXd& knots, int j, int degree, double x) {
  if (degree == 0) {
    const double lo = knots(j);
    const double hi = knots(j + 1);
    if (lo <= x && x < hi) return 1.0;
    if (x == knots(knots.size() - 1) && x == hi && lo < hi) return 1.0;
    return 0.0;
  }
  double left = 0.0;
  const double dl = knots(j + degree) - knots(j);
  if (dl > 0.0) left = (x - knots(j)) / dl * cox_de_boor(knots, j, degree - 1, x);
  double right = 0.0;
  const double dr = knots(j + degree + 1) - knots(j + 1);
  if (dr > 0.0)
    right = (knots(j + degree + 1) - x) / dr * cox_de_boor(knots, j + 1, degree - 1, x);
  return left + right;
}

}  // namespace

TEST_SUITE("splines") {
  TEST_CASE("single-interval cubic basis is the Bernstein basis") {
    const tvb::SplineBasis basis = tvb::build_basis(4, 3);
    const Eigen::VectorXd at0 = basis.eval(0.0);
    CHECK(at0(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(at0(1) == 0.0);
    CHECK(at0(2) == 0.0);
    CHECK(at0(3) == 0.0);

    const Eigen::VectorXd mid = basis.eval(0.5);
    CHECK(mid(0) == doctest::Approx(0.125).epsilon(1e-13));
    CHECK(mid(1) == doctest::Approx(0.375).epsilon(1e-13));
    CHECK(mid(2) == doctest::Approx(0.375).epsilon(1e-13));
    CHECK(mid(3) == doctest::Approx(0.125).epsilon(1e-13));

    const Eigen::VectorXd at1 = basis.eval(1.0);
    CHECK(at1(3) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(at1.head(3).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("six basis functions put interior knots at thirds") {
    const tvb::SplineBasis basis = tvb::build_basis(6, 3);
    const Eigen::VectorXd& knots = basis.knots();
    REQUIRE(knots.size() == 10);  // K + degree + 1
    for (int i = 0; i < 4; ++i) CHECK(knots(i) == 0.0);
    CHECK(knots(4) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(knots(5) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    for (int i = 6; i < 10; ++i) CHECK(knots(i) == 1.0);
  }

  TEST_CASE("underdetermined basis is rejected") {
    CHECK_THROWS_AS(tvb::build_basis(3, 3), std::invalid_argument);
    CHECK_THROWS_AS(tvb::build_basis(4, -1), std::invalid_argument);
  }

  TEST_CASE("points outside the domain are rejected") {
    const tvb::SplineBasis basis = tvb::build_basis(6, 3);
    CHECK_THROWS_AS(basis.eval(-0.001), std::invalid_argument);
    CHECK_THROWS_AS(basis.eval(1.001), std::invalid_argument);
  }

  TEST_CASE("partition of unity and nonnegativity at random points") {
    const tvb::SplineBasis basis = tvb::build_basis(6, 3);
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
      const Eigen::VectorXd values = basis.eval(unif(rng));
      CHECK(values.minCoeff() >= 0.0);
      CHECK(std::abs(values.sum() - 1.0) <= 1e-12);
    }
    CHECK(std::abs(basis.eval(0.0).sum() - 1.0) <= 1e-12);
    CHECK(std::abs(basis.eval(1.0).sum() - 1.0) <= 1e-12);
  }

  TEST_CASE("agrees with the literal recursion on a fine grid") {
    for (const auto& [num_basis, degree] : {std::pair{4, 3}, {6, 3}, {8, 3}, {7, 2}, {5, 1}}) {
      const tvb::SplineBasis basis = tvb::build_basis(num_basis, degree);
      for (int g = 0; g <= 100; ++g) {
        const double x = static_cast<double>(g) / 100.0;
        const Eigen::VectorXd values = basis.eval(x);
        for (int j = 0; j < num_basis; ++j)
          CHECK(std::abs(values(j) - cox_de_boor(basis.knots(), j, degree, x)) <= 1e-12);
      }
    }
  }

  TEST_CASE("nonzero entries form a short contiguous run") {
    const tvb::SplineBasis basis = tvb::build_basis(8, 3);
    for (int g = 0; g <= 200; ++g) {
      const Eigen::VectorXd values = basis.eval(static_cast<double>(g) / 200.0);
      int first = -1;
      int last = -1;
      for (int j = 0; j < 8; ++j) {
        if (values(j) != 0.0) {
          if (first < 0) first = j;
          last = j;
        }
      }
      REQUIRE(first >= 0);
      CHECK(last - first + 1 <= 4);  // degree + 1
      for (int j = first; j <= last; ++j) CHECK(values(j) != 0.0);
    }
  }

  TEST_CASE("row evaluation matches pointwise evaluation") {
    const tvb::SplineBasis basis = tvb::build_basis(6, 3);
    Eigen::VectorXd xs(4);
    xs << 0.0, 0.25, 0.8, 1.0;
    const Eigen::MatrixXd rows = basis.rows_at(xs);
    REQUIRE(rows.rows() == 4);
    REQUIRE(rows.cols() == 6);
    for (Eigen::Index i = 0; i < xs.size(); ++i)
      CHECK((rows.row(i).transpose() - basis.eval(xs(i))).cwiseAbs().maxCoeff() == 0.0);
  }
}
