#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "fd_check.hpp"
#include "tvb/fit.hpp"
#include "tvb/tvbarc.hpp"

namespace {

tvb::CountSeries poisson_like_series(int length, unsigned seed, int cap = 12) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> counts(0, cap);
  Eigen::VectorXi values(length);
  for (int t = 0; t < length; ++t) values(t) = counts(rng);
  return tvb::CountSeries(values);
}

tvb::TvbarcParams random_params(int k, int p, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal(0.0, 0.5);
  std::uniform_real_distribution<double> box(0.2, 0.8);
  tvb::TvbarcParams params;
  params.beta.resize(k);
  for (int j = 0; j < k; ++j) params.beta(j) = normal(rng);
  params.theta.resize(p, k);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < k; ++j) params.theta(i, j) = box(rng);
  params.delta.resize(p + 1);
  for (int l = 0; l <= p; ++l) params.delta(l) = normal(rng);
  return params;
}

}  // namespace

TEST_SUITE("tvbarc") {
  TEST_CASE("simplex weights: symmetry, softmax value, robustness") {
    Eigen::VectorXd two = tvb::simplex_weights(Eigen::Vector2d(0.0, 0.0));
    CHECK(two(0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(two(1) == doctest::Approx(0.5).epsilon(1e-15));

    Eigen::VectorXd four = tvb::simplex_weights(Eigen::Vector4d::Zero());
    for (int i = 0; i < 4; ++i) CHECK(four(i) == doctest::Approx(0.25).epsilon(1e-15));

    Eigen::VectorXd skew = tvb::simplex_weights(Eigen::Vector2d(1.0, 0.0));
    const double e = std::exp(1.0);
    CHECK(skew(0) == doctest::Approx(e / (e + 1.0)).epsilon(1e-15));
    CHECK(skew(1) == doctest::Approx(1.0 / (e + 1.0)).epsilon(1e-15));
    CHECK(skew(0) == doctest::Approx(0.73106).epsilon(1e-5));
    CHECK(skew(1) == doctest::Approx(0.26894).epsilon(1e-5));

    // Huge entries must not overflow thanks to max-subtraction.
    Eigen::VectorXd huge = tvb::simplex_weights(Eigen::Vector3d(800.0, 0.0, -800.0));
    CHECK(huge.allFinite());
    CHECK(std::abs(huge.sum() - 1.0) <= 1e-12);
    CHECK(huge(0) == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("simplex weights are shift invariant and sum to one") {
    std::mt19937 rng(7);
    std::normal_distribution<double> normal(0.0, 2.0);
    for (int rep = 0; rep < 50; ++rep) {
      Eigen::VectorXd delta(4);
      for (int l = 0; l < 4; ++l) delta(l) = normal(rng);
      const Eigen::VectorXd w = tvb::simplex_weights(delta);
      CHECK(std::abs(w.sum() - 1.0) <= 1e-12);
      CHECK(w.minCoeff() > 0.0);
      const Eigen::VectorXd shifted = tvb::simplex_weights(delta.array() + 2.0);
      CHECK((w - shifted).cwiseAbs().maxCoeff() <= 1e-14);
    }
  }

  TEST_CASE("coefficient functions at a point") {
    const tvb::SplineBasis basis = tvb::build_basis(6, 3);
    tvb::TvbarcParams params;
    params.beta = Eigen::VectorXd::Zero(6);
    params.theta = Eigen::MatrixXd::Ones(2, 6);
    params.delta = Eigen::VectorXd::Zero(3);

    for (double x : {0.0, 0.31, 0.77, 1.0}) {
      const tvb::CoefficientValues c = tvb::coefficient_at(params, basis, x);
      CHECK(c.mu == doctest::Approx(1.0).epsilon(1e-12));  // unit alphas, partition of unity
      CHECK(c.a(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));  // theta == 1 gives a_i = M_i
      CHECK(c.a(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }

    params.theta.setZero();
    const tvb::CoefficientValues zero = tvb::coefficient_at(params, basis, 0.4);
    CHECK(zero.a(0) == 0.0);
    CHECK(zero.a(1) == 0.0);

    params.theta(0, 0) = 1.5;
    CHECK_THROWS_AS(tvb::coefficient_at(params, basis, 0.4), std::invalid_argument);
  }

  TEST_CASE("intensities: constant cases by hand") {
    const tvb::SplineBasis basis = tvb::build_basis(4, 3);

    tvb::TvbarcParams params;
    params.beta = Eigen::VectorXd::Zero(4);
    params.theta = Eigen::MatrixXd::Zero(1, 4);
    params.delta = Eigen::VectorXd::Zero(2);
    Eigen::VectorXi x(3);
    x << 2, 4, 0;
    const tvb::TvbarcDesign design(tvb::CountSeries(x), basis, 1);

    Eigen::VectorXd flat = tvb::intensities(params, design);
    REQUIRE(flat.size() == 2);
    CHECK(flat(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(flat(1) == doctest::Approx(1.0).epsilon(1e-14));

    params.theta.setOnes();  // a1(x) = M_1 = 0.5
    Eigen::VectorXd ar = tvb::intensities(params, design);
    CHECK(ar(0) == doctest::Approx(2.0).epsilon(1e-14));  // 1 + 0.5 * 2
    CHECK(ar(1) == doctest::Approx(3.0).epsilon(1e-14));  // 1 + 0.5 * 4
  }

  TEST_CASE("intensities match a term-by-term re-evaluation") {
    const tvb::SplineBasis basis = tvb::build_basis(6, 3);
    const tvb::CountSeries series = poisson_like_series(21, 91);
    const int p = 2;
    const tvb::TvbarcDesign design(series, basis, p);
    const tvb::TvbarcParams params = random_params(6, p, 17);

    const Eigen::VectorXd lambda = tvb::intensities(params, design);
    const Eigen::VectorXd xs = series.as_real();
    const auto horizon = static_cast<double>(series.horizon());
    for (int t = p; t <= series.horizon(); ++t) {
      const tvb::CoefficientValues c = tvb::coefficient_at(params, basis, t / horizon);
      double expected = c.mu;
      for (int i = 1; i <= p; ++i) expected += c.a(i - 1) * xs(t - i);
      CHECK(std::abs(lambda(t - p) - expected) <= 1e-12 * std::max(1.0, expected));
    }
  }

  TEST_CASE("log posterior: zero counts, one term, and an independent oracle") {
    const tvb::SplineBasis basis = tvb::build_basis(4, 3);
    const tvb::Hyper hyper;

    // Ten zero observations with mu == 1 and p = 0: Poisson part is -10.
    tvb::TvbarcParams flat;
    flat.beta = Eigen::VectorXd::Zero(4);
    flat.theta = Eigen::MatrixXd(0, 4);
    flat.delta = Eigen::VectorXd::Zero(1);
    const tvb::TvbarcDesign zeros(tvb::CountSeries(Eigen::VectorXi::Zero(10)), basis, 0);
    CHECK(tvb::log_posterior(flat, zeros, hyper) == doctest::Approx(-10.0).epsilon(1e-14));

    // One term with lambda = 2, X = 3: -2 + 3 log 2 plus the beta penalty.
    tvb::TvbarcParams two = flat;
    two.beta = Eigen::VectorXd::Constant(4, std::log(2.0));
    Eigen::VectorXi single(1);
    single << 3;
    const tvb::TvbarcDesign one(tvb::CountSeries(single), basis, 0);
    const double expected = -2.0 + 3.0 * std::log(2.0) -
                            4.0 * std::log(2.0) * std::log(2.0) / (2.0 * hyper.c2);
    CHECK(tvb::log_posterior(two, one, hyper) == doctest::Approx(expected).epsilon(1e-14));

    // Random instance versus a naive per-term evaluation.
    const tvb::SplineBasis basis6 = tvb::build_basis(6, 3);
    const tvb::CountSeries series = poisson_like_series(51, 23);
    const int p = 1;
    const tvb::TvbarcDesign design(series, basis6, p);
    const tvb::TvbarcParams params = random_params(6, p, 5);
    const Eigen::VectorXd xs = series.as_real();
    double naive = 0.0;
    for (int t = p; t <= series.horizon(); ++t) {
      const tvb::CoefficientValues c =
          tvb::coefficient_at(params, basis6, t / static_cast<double>(series.horizon()));
      double lambda = c.mu;
      for (int i = 1; i <= p; ++i) lambda += c.a(i - 1) * xs(t - i);
      naive += -lambda + xs(t) * std::log(lambda);
    }
    naive -= params.beta.squaredNorm() / (2.0 * hyper.c2);
    naive -= params.delta.squaredNorm() / (2.0 * hyper.c1);
    CHECK(tvb::log_posterior(params, design, hyper) ==
          doctest::Approx(naive).epsilon(1e-10));
  }

  TEST_CASE("log posterior is -infinity outside the theta box") {
    const tvb::SplineBasis basis = tvb::build_basis(6, 3);
    const tvb::TvbarcDesign design(poisson_like_series(20, 3), basis, 1);
    tvb::TvbarcParams params = random_params(6, 1, 29);
    params.theta(0, 2) = 1.0001;
    CHECK(tvb::log_posterior(params, design, tvb::Hyper{}) ==
          -std::numeric_limits<double>::infinity());
  }

  TEST_CASE("likelihood part ignores a constant shift of delta") {
    const tvb::SplineBasis basis = tvb::build_basis(6, 3);
    const tvb::TvbarcDesign design(poisson_like_series(40, 11), basis, 2);
    const tvb::TvbarcParams params = random_params(6, 2, 31);
    tvb::TvbarcParams shifted = params;
    shifted.delta.array() += 2.0;
    tvb::Hyper no_penalty;
    no_penalty.c1 = std::numeric_limits<double>::infinity();
    const double base = tvb::log_posterior(params, design, no_penalty);
    CHECK(tvb::log_posterior(shifted, design, no_penalty) ==
          doctest::Approx(base).epsilon(1e-12));
  }

  TEST_CASE("gradient matches central finite differences") {
    const tvb::SplineBasis basis = tvb::build_basis(6, 3);
    const tvb::Hyper hyper;
    for (int rep = 0; rep < 10; ++rep) {
      const int p = rep % 2 == 0 ? 1 : 2;
      const tvb::CountSeries series = poisson_like_series(51, 100 + static_cast<unsigned>(rep));
      const tvb::TvbarcDesign design(series, basis, p);
      const tvb::TvbarcParams params = random_params(6, p, 200 + static_cast<unsigned>(rep));
      const tvb::TvbarcLayout layout{6, p};

      const tvb::TvbarcGrad grad = tvb::grad_log_posterior(params, design, hyper);
      const Eigen::VectorXd analytic =
          layout.flatten(tvb::TvbarcParams{grad.beta, grad.theta, grad.delta});
      const Eigen::VectorXd numeric = testutil::central_difference(
          [&](const Eigen::VectorXd& v) {
            return tvb::log_posterior(layout.unflatten(v), design, hyper);
          },
          layout.flatten(params));
      CHECK(testutil::gradient_discrepancy(analytic, numeric) <= 1e-6);
    }
  }

  TEST_CASE("theta gradient vanishes on all-zero data") {
    const tvb::SplineBasis basis = tvb::build_basis(6, 3);
    const tvb::TvbarcDesign design(tvb::CountSeries(Eigen::VectorXi::Zero(30)), basis, 1);
    tvb::TvbarcParams params = random_params(6, 1, 41);
    params.theta.setConstant(0.5);
    const tvb::TvbarcGrad grad = tvb::grad_log_posterior(params, design, tvb::Hyper{});
    CHECK(grad.theta.cwiseAbs().maxCoeff() == 0.0);  // every lagged count is zero
  }

  TEST_CASE("theta gradient ignores a constant shift of delta") {
    const tvb::SplineBasis basis = tvb::build_basis(6, 3);
    const tvb::TvbarcDesign design(poisson_like_series(40, 13), basis, 2);
    const tvb::TvbarcParams params = random_params(6, 2, 37);
    tvb::TvbarcParams shifted = params;
    shifted.delta.array() += 2.0;
    const tvb::Hyper hyper;
    const tvb::TvbarcGrad a = tvb::grad_log_posterior(params, design, hyper);
    const tvb::TvbarcGrad b = tvb::grad_log_posterior(shifted, design, hyper);
    CHECK((a.theta - b.theta).cwiseAbs().maxCoeff() <= 1e-12);
  }

  TEST_CASE("initialization starts inside the constraints near the data scale") {
    const tvb::SplineBasis basis = tvb::build_basis(6, 3);
    const tvb::CountSeries series = poisson_like_series(50, 59);
    const tvb::TvbarcDesign design(series, basis, 2);
    const tvb::TvbarcParams params = tvb::initial_params(design);
    REQUIRE(params.beta.size() == 6);
    REQUIRE(params.theta.rows() == 2);
    REQUIRE(params.delta.size() == 3);
    const double expected = std::log(std::max(series.as_real().mean(), 1.0)) - std::log(6.0);
    CHECK(params.beta(0) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(std::isfinite(tvb::log_posterior(params, design, tvb::Hyper{})));
  }

  TEST_CASE("series too short for the lag order is rejected") {
    const tvb::SplineBasis basis = tvb::build_basis(4, 3);
    Eigen::VectorXi two(2);
    two << 1, 2;
    CHECK_THROWS_AS(tvb::TvbarcDesign(tvb::CountSeries(two), basis, 3), std::invalid_argument);
  }
}
