#include "tvb/simulator.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace tvb {

TruthFunctions::TruthFunctions(std::function<double(double)> mu,
                               std::vector<std::function<double(double)>> a,
                               std::vector<std::function<double(double)>> b, std::string label)
    : mu_(std::move(mu)), a_(std::move(a)), b_(std::move(b)), label_(std::move(label)) {
  if (!mu_) throw std::invalid_argument("TruthFunctions: mu is required");
  constexpr int kGrid = 201;
  for (int g = 0; g < kGrid; ++g) {
    const double x = static_cast<double>(g) / (kGrid - 1);
    if (!(mu_(x) > 0.0))
      throw std::invalid_argument("TruthFunctions '" + label_ + "': mu(x) must be positive, " +
                                  "violated at x=" + std::to_string(x));
    double total = 0.0;
    for (const auto& f : a_) total += f(x);
    for (const auto& f : b_) total += f(x);
    if (!(total < 1.0) || total < 0.0)
      throw std::invalid_argument("TruthFunctions '" + label_ +
                                  "': lag coefficients must sum into [0,1), violated at x=" +
                                  std::to_string(x));
  }
}

TruthFunctions builtin_truth(const std::string& name) {
  auto bump = [](double scale) {
    return [scale](double x) { return scale * std::exp(-(x - 0.5) * (x - 0.5) / 0.1); };
  };
  auto a1 = [](double x) { return 0.3 * (x - 1.0) * (x - 1.0) + 0.1; };
  if (name == "AR1") return TruthFunctions(bump(10.0), {a1}, {}, "AR1");
  if (name == "AR2") {
    auto a2 = [](double x) { return 0.4 * x * x + 0.1; };
    return TruthFunctions(bump(10.0), {a1, a2}, {}, "AR2");
  }
  if (name == "INGARCH11") {
    auto b1 = [](double x) { return 0.1 * std::pow(x, 1.5) + 0.1; };
    return TruthFunctions(bump(25.0), {a1}, {b1}, "INGARCH11");
  }
  throw std::invalid_argument("builtin_truth: unknown scenario '" + name +
                              "' (expected AR1, AR2, or INGARCH11)");
}

double default_lambda_init(const TruthFunctions& truth) {
  double occupied = 0.0;
  for (int i = 0; i < truth.p(); ++i) occupied += truth.a(i, 0.0);
  for (int k = 0; k < truth.q(); ++k) occupied += truth.b(k, 0.0);
  return truth.mu(0.0) / (1.0 - occupied);
}

CountSeries simulate(const TruthFunctions& truth, int T, std::mt19937_64& rng,
                     double lambda_init) {
  if (T < 10) throw std::invalid_argument("simulate: T must be >= 10");
  if (!(lambda_init > 0.0)) throw std::invalid_argument("simulate: lambda_init must be positive");
  const int p = truth.p();
  const int q = truth.q();
  Eigen::VectorXi counts(T + 1);
  Eigen::VectorXd lambda(T + 1);

  lambda(0) = lambda_init;
  counts(0) = std::poisson_distribution<int>(lambda_init)(rng);
  for (int t = 1; t <= T; ++t) {
    const double x = static_cast<double>(t) / T;
    double rate = truth.mu(x);
    for (int i = 1; i <= p && i <= t; ++i) rate += truth.a(i - 1, x) * counts(t - i);
    for (int k = 1; k <= q && k <= t; ++k) rate += truth.b(k - 1, x) * lambda(t - k);
    lambda(t) = rate;
    counts(t) = std::poisson_distribution<int>(rate)(rng);
  }
  return CountSeries(counts);
}

CountSeries simulate(const TruthFunctions& truth, int T, std::mt19937_64& rng) {
  return simulate(truth, T, rng, default_lambda_init(truth));
}

}  // namespace tvb
