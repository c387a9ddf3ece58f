#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "tvb/series.hpp"

namespace tvb {

/// True coefficient functions for a data-generating process. Construction
/// checks positivity of mu and the stability bound sup_x (sum a + sum b) < 1
/// on a fine grid, so downstream code can rely on them.
class TruthFunctions {
 public:
  TruthFunctions(std::function<double(double)> mu, std::vector<std::function<double(double)>> a,
                 std::vector<std::function<double(double)>> b, std::string label);

  double mu(double x) const { return mu_(x); }
  double a(int i, double x) const { return a_.at(static_cast<std::size_t>(i))(x); }
  double b(int k, double x) const { return b_.at(static_cast<std::size_t>(k))(x); }
  int p() const { return static_cast<int>(a_.size()); }
  int q() const { return static_cast<int>(b_.size()); }
  const std::string& label() const { return label_; }

 private:
  std::function<double(double)> mu_;
  std::vector<std::function<double(double)>> a_;
  std::vector<std::function<double(double)>> b_;
  std::string label_;
};

/// The three bundled scenarios: "AR1", "AR2" (pure autoregressive) and
/// "INGARCH11" (one count lag, one intensity feedback lag). Unknown names are
/// rejected.
TruthFunctions builtin_truth(const std::string& name);

/// Approximate local stationary mean at x=0: mu(0) / (1 - sum a(0) - sum b(0)).
double default_lambda_init(const TruthFunctions& truth);

/// Draw X_0 ~ Poisson(lambda_init), then X_t ~ Poisson(lambda_t) for t=1..T
/// where lambda_t follows the autoregressive/feedback recursion with zeros for
/// indices below 0 and lambda_0 = lambda_init.
CountSeries simulate(const TruthFunctions& truth, int T, std::mt19937_64& rng,
                     double lambda_init);
CountSeries simulate(const TruthFunctions& truth, int T, std::mt19937_64& rng);

}  // namespace tvb
