#pragma once

#include <Eigen/Core>

#include <functional>
#include <string>

#include "tvb/hmc.hpp"
#include "tvb/series.hpp"

namespace tvb {

/// Pointwise posterior interval for one coefficient function.
struct CredibleBand {
  Eigen::VectorXd grid;   // strictly increasing points in [0,1]
  Eigen::VectorXd lower;
  Eigen::VectorXd mean;
  Eigen::VectorXd upper;
  double level = 0.95;
};

/// Maps flat sampler draws back to model quantities. Fitted targets implement
/// this next to the sampling interface so evaluation code stays model-agnostic.
class DrawEvaluator {
 public:
  virtual ~DrawEvaluator() = default;
  /// Intensity path implied by one draw, aligned with observed().
  virtual Eigen::VectorXd intensity_path(const Eigen::VectorXd& draw) const = 0;
  /// Counts entering the fit (the first conditioned-on values are excluded).
  virtual Eigen::VectorXd observed() const = 0;
  /// Coefficient functions in order mu, a_1..a_p, b_1..b_q.
  virtual int n_functions() const = 0;
  virtual std::string function_name(int f) const = 0;
  /// Values of function f on `grid` for every row of `draws`; one row per draw.
  virtual Eigen::MatrixXd function_draws(const Eigen::MatrixXd& draws, int f,
                                         const Eigen::VectorXd& grid) const = 0;
};

/// Quantile with linear interpolation between order statistics (the common
/// statistical-software default), so e.g. draws 1..100 give 3.475 at 2.5%.
double interpolated_quantile(Eigen::VectorXd values, double prob);

/// Mean over post-burn-in draws of the per-term squared residual
/// (1/n) sum_t (X_t - lambda_t)^2, recomputing the intensity path per draw.
double amse(const Chain& chain, const DrawEvaluator& model);

/// Pointwise mean and equal-tail interval of coefficient function f over the
/// post-burn-in draws.
CredibleBand credible_band(const Chain& chain, const DrawEvaluator& model, int f,
                           const Eigen::VectorXd& grid, double level);

/// Fraction of grid points where the band contains truth(x).
double coverage(const CredibleBand& band, const std::function<double(double)>& truth);

/// Time-constant Poisson autoregression fitted by projected gradient ascent
/// under mu > 0, a_i >= 0, sum a_i < 1. Serves as the comparison line for the
/// time-varying fits.
struct BaselineFit {
  double mu = 0.0;
  Eigen::VectorXd a;
  double amse = 0.0;
  bool converged = false;
  int iterations = 0;
};

BaselineFit fit_constant_baseline(const CountSeries& series, int p);

}  // namespace tvb
