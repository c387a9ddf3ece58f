#pragma once

#include <Eigen/Core>

#include "tvb/series.hpp"
#include "tvb/splines.hpp"

namespace tvb {

/// Prior variances for the unconstrained parameters.
struct Hyper {
  double c1 = 100.0;  // variance of the N(0, c1) prior on each delta entry
  double c2 = 100.0;  // variance of the N(0, c2) prior on each beta entry
};

/// Unconstrained parameterization of a TVBARC(p) model.
///
/// The mean function is mu(x) = sum_j exp(beta_j) B_j(x); the lag-i
/// coefficient is a_i(x) = M_i sum_j theta_ij B_j(x) with simplex weights
/// M = softmax(delta) over p+1 components (component 0 is slack mass).
/// Entries of theta live in [0,1], which keeps sup_x sum_i a_i(x) < 1.
struct TvbarcParams {
  Eigen::VectorXd beta;   // length K
  Eigen::MatrixXd theta;  // p x K, entries in [0,1]
  Eigen::VectorXd delta;  // length p+1
};

/// softmax(delta), computed with max-subtraction so arbitrarily large
/// entries do not overflow. Entries are in (0,1) and sum to 1.
Eigen::VectorXd simplex_weights(const Eigen::VectorXd& delta);

struct CoefficientValues {
  double mu = 0.0;
  Eigen::VectorXd a;  // length p
};

/// (mu(x), a_1(x)..a_p(x)) at a single rescaled time.
CoefficientValues coefficient_at(const TvbarcParams& params, const SplineBasis& basis, double x);

/// Data, basis, and lag structure fixed for the duration of one fit.
/// Basis rows over the observation grid t/T and the lagged-count matrix are
/// precomputed here since they never change during sampling.
class TvbarcDesign {
 public:
  TvbarcDesign(CountSeries series, SplineBasis basis, int p);

  const CountSeries& series() const { return series_; }
  const SplineBasis& basis() const { return basis_; }
  int p() const { return p_; }
  int t_start() const { return p_; }
  Eigen::Index n_terms() const { return x_obs_.size(); }

  /// Basis values at t/T for t = 0..T (one row per t).
  const Eigen::MatrixXd& basis_all() const { return basis_all_; }
  /// Rows of basis_all() for t = t_start..T.
  const Eigen::MatrixXd& basis_obs() const { return basis_obs_; }
  /// X_t for t = t_start..T.
  const Eigen::VectorXd& x_obs() const { return x_obs_; }
  /// Column i-1 holds X_{t-i} for t = t_start..T.
  const Eigen::MatrixXd& x_lag() const { return x_lag_; }

 private:
  CountSeries series_;
  SplineBasis basis_;
  int p_ = 0;
  Eigen::MatrixXd basis_all_;
  Eigen::MatrixXd basis_obs_;
  Eigen::VectorXd x_obs_;
  Eigen::MatrixXd x_lag_;
};

/// Intensity path lambda_p..lambda_T implied by the parameters.
Eigen::VectorXd intensities(const TvbarcParams& params, const TvbarcDesign& design);

/// Per-observation Poisson terms -lambda_t + X_t log(lambda_t); the log X_t!
/// constant is dropped throughout since it cancels in Metropolis ratios.
Eigen::VectorXd poisson_terms(const Eigen::VectorXd& lambda, const Eigen::VectorXd& x);

/// Log posterior (up to a constant): Poisson terms for t = p..T plus the
/// Gaussian penalties on beta and delta. Returns -infinity when any theta
/// entry leaves [0,1].
double log_posterior(const TvbarcParams& params, const TvbarcDesign& design, const Hyper& hyper);

struct TvbarcGrad {
  Eigen::VectorXd beta;
  Eigen::MatrixXd theta;
  Eigen::VectorXd delta;
};

/// Ascent-direction gradient of log_posterior.
TvbarcGrad grad_log_posterior(const TvbarcParams& params, const TvbarcDesign& design,
                              const Hyper& hyper);

/// Start inside all constraints at a data-plausible intensity: constant beta
/// from the sample mean, theta at the box center, delta at equal weights.
TvbarcParams initial_params(const TvbarcDesign& design);

}  // namespace tvb
