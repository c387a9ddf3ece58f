#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "tvb/simulator.hpp"

TEST_SUITE("simulator") {
  TEST_CASE("builtin scenarios evaluate to their defining formulas") {
    const tvb::TruthFunctions ar1 = tvb::builtin_truth("AR1");
    CHECK(ar1.p() == 1);
    CHECK(ar1.q() == 0);
    CHECK(ar1.label() == "AR1");
    CHECK(ar1.mu(0.5) == doctest::Approx(10.0).epsilon(1e-14));
    CHECK(ar1.mu(0.0) == doctest::Approx(10.0 * std::exp(-2.5)).epsilon(1e-14));
    CHECK(ar1.a(0, 0.5) == doctest::Approx(0.175).epsilon(1e-14));
    CHECK(ar1.a(0, 0.0) == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(ar1.a(0, 1.0) == doctest::Approx(0.1).epsilon(1e-14));

    const tvb::TruthFunctions ar2 = tvb::builtin_truth("AR2");
    CHECK(ar2.p() == 2);
    CHECK(ar2.a(1, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(ar2.a(1, 0.0) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(ar2.a(0, 1.0) == doctest::Approx(0.1).epsilon(1e-14));

    const tvb::TruthFunctions ingarch = tvb::builtin_truth("INGARCH11");
    CHECK(ingarch.p() == 1);
    CHECK(ingarch.q() == 1);
    CHECK(ingarch.mu(0.0) == doctest::Approx(25.0 * std::exp(-2.5)).epsilon(1e-14));
    CHECK(ingarch.b(0, 0.0) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(ingarch.b(0, 1.0) == doctest::Approx(0.2).epsilon(1e-14));

    CHECK_THROWS_AS(tvb::builtin_truth("AR3"), std::invalid_argument);
  }

  TEST_CASE("truth functions validate positivity and the stability bound") {
    auto one = [](double) { return 1.0; };
    CHECK_THROWS_AS(tvb::TruthFunctions([](double x) { return x; }, {}, {}, "bad-mu"),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        tvb::TruthFunctions(one, {[](double) { return 0.6; }, [](double) { return 0.5; }}, {},
                            "unstable"),
        std::invalid_argument);
    CHECK_THROWS_AS(tvb::TruthFunctions(one, {[](double) { return -0.1; }}, {}, "negative"),
                    std::invalid_argument);
    CHECK_NOTHROW(tvb::TruthFunctions(one, {[](double) { return 0.4; }},
                                      {[](double) { return 0.3; }}, "ok"));
  }

  TEST_CASE("default initial intensity solves the x=0 balance") {
    const tvb::TruthFunctions ar1 = tvb::builtin_truth("AR1");
    const double expected = 10.0 * std::exp(-2.5) / 0.6;
    CHECK(tvb::default_lambda_init(ar1) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(tvb::default_lambda_init(ar1) == doctest::Approx(1.36808).epsilon(1e-5));

    const tvb::TruthFunctions ingarch = tvb::builtin_truth("INGARCH11");
    CHECK(tvb::default_lambda_init(ingarch) ==
          doctest::Approx(25.0 * std::exp(-2.5) / 0.5).epsilon(1e-14));
  }

  TEST_CASE("simulated data is nonnegative with the right length") {
    const tvb::TruthFunctions truth = tvb::builtin_truth("INGARCH11");
    std::mt19937_64 rng(2024);
    const tvb::CountSeries series = tvb::simulate(truth, 100, rng);
    CHECK(series.length() == 101);
    CHECK(series.horizon() == 100);
    CHECK(series.values.minCoeff() >= 0);
  }

  TEST_CASE("constant intensity obeys the law of large numbers") {
    const tvb::TruthFunctions constant([](double) { return 5.0; }, {}, {}, "flat");
    std::mt19937_64 rng(11);
    const tvb::CountSeries series = tvb::simulate(constant, 10000, rng, 5.0);
    const double mean = series.as_real().mean();
    CHECK(mean > 4.8);
    CHECK(mean < 5.2);
  }

  TEST_CASE("replicate averages track the exact mean recursion") {
    const tvb::TruthFunctions truth = tvb::builtin_truth("AR1");
    const int T = 200;
    const int reps = 300;
    const double lambda_init = tvb::default_lambda_init(truth);

    Eigen::MatrixXd sample(reps, T + 1);
    std::mt19937_64 rng(314159);
    for (int r = 0; r < reps; ++r)
      sample.row(r) = tvb::simulate(truth, T, rng, lambda_init).as_real().transpose();

    // E[X_t] = mu(t/T) + a1(t/T) E[X_{t-1}], seeded with E[X_0] = lambda_init.
    Eigen::VectorXd exact(T + 1);
    exact(0) = lambda_init;
    for (int t = 1; t <= T; ++t) {
      const double x = static_cast<double>(t) / T;
      exact(t) = truth.mu(x) + truth.a(0, x) * exact(t - 1);
    }

    const Eigen::VectorXd mean = sample.colwise().mean();
    for (int t = 0; t <= T; ++t) {
      const double sd = std::sqrt(
          (sample.col(t).array() - mean(t)).square().sum() / (reps - 1));
      const double slack = 5.0 * sd / std::sqrt(static_cast<double>(reps)) + 0.05;
      CHECK(std::abs(mean(t) - exact(t)) <= slack);
    }
  }

  TEST_CASE("the generator is deterministic for a fixed seed") {
    const tvb::TruthFunctions truth = tvb::builtin_truth("AR2");
    std::mt19937_64 a(555), b(555), c(556);
    const tvb::CountSeries sa = tvb::simulate(truth, 80, a);
    const tvb::CountSeries sb = tvb::simulate(truth, 80, b);
    const tvb::CountSeries sc = tvb::simulate(truth, 80, c);
    CHECK((sa.values.array() == sb.values.array()).all());
    CHECK(!(sa.values.array() == sc.values.array()).all());
  }

  TEST_CASE("argument validation") {
    const tvb::TruthFunctions truth = tvb::builtin_truth("AR1");
    std::mt19937_64 rng(1);
    CHECK_THROWS_AS(tvb::simulate(truth, 9, rng), std::invalid_argument);
    CHECK_THROWS_AS(tvb::simulate(truth, 50, rng, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(tvb::simulate(truth, 50, rng, -1.0), std::invalid_argument);
  }
}
