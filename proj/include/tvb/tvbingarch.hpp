#pragma once

#include <Eigen/Core>

#include "tvb/series.hpp"
#include "tvb/splines.hpp"
#include "tvb/tvbarc.hpp"

namespace tvb {

/// Prior settings for the TVBINGARCH model: Gaussian variances as in Hyper
/// plus the Inverse-Gamma(d1, d1) shape/scale for the initial intensity.
struct HyperIngarch {
  double c1 = 100.0;
  double c2 = 100.0;
  double d1 = 0.1;
};

/// Unconstrained parameterization of a TVBINGARCH(p,q) model. On top of the
/// TVBARC encoding, eta drives the feedback coefficients
/// b_k(x) = M_{p+k} sum_j eta_kj B_j(x); the simplex weights run over
/// p+q+1 components, so sup_x (sum_i a_i(x) + sum_k b_k(x)) < 1 holds by
/// construction. lambda0 is the intensity at t=0.
struct TvbingarchParams {
  Eigen::VectorXd beta;   // length K
  Eigen::MatrixXd theta;  // p x K, entries in [0,1]
  Eigen::MatrixXd eta;    // q x K, entries in [0,1]
  Eigen::VectorXd delta;  // length p+q+1
  double lambda0 = 1.0;
};

/// Data, basis, and order structure fixed during one fit. Lagged counts are
/// zero-padded, so any p, q >= 0 works with any series of length >= 2.
class TvbingarchDesign {
 public:
  TvbingarchDesign(CountSeries series, SplineBasis basis, int p, int q);

  const CountSeries& series() const { return series_; }
  const SplineBasis& basis() const { return basis_; }
  int p() const { return p_; }
  int q() const { return q_; }
  /// Number of Poisson terms: t = 1..T.
  Eigen::Index n_terms() const { return x_obs_.size(); }

  /// Basis values at t/T for t = 0..T.
  const Eigen::MatrixXd& basis_all() const { return basis_all_; }
  /// Rows of basis_all() for t = 1..T.
  const Eigen::MatrixXd& basis_obs() const { return basis_obs_; }
  /// X_t for t = 1..T.
  const Eigen::VectorXd& x_obs() const { return x_obs_; }
  /// Column i-1 holds X_{t-i} for t = 1..T, zero where t-i < 0.
  const Eigen::MatrixXd& x_lag() const { return x_lag_; }

 private:
  CountSeries series_;
  SplineBasis basis_;
  int p_ = 0;
  int q_ = 0;
  Eigen::MatrixXd basis_all_;
  Eigen::MatrixXd basis_obs_;
  Eigen::VectorXd x_obs_;
  Eigen::MatrixXd x_lag_;
};

/// Full intensity path lambda_0..lambda_T: lambda_0 is the parameter, and for
/// t >= 1 the recursion uses zeros for X and lambda indices below 0.
Eigen::VectorXd intensities_recursive(const TvbingarchParams& params,
                                      const TvbingarchDesign& design);

/// Log posterior (up to a constant): Poisson terms for t = 1..T, Gaussian
/// penalties on beta and delta, and the Inverse-Gamma term
/// -(d1+1) log(lambda0) - d1/lambda0. Returns -infinity when theta or eta
/// leaves [0,1] or lambda0 <= 0.
double log_posterior_ingarch(const TvbingarchParams& params, const TvbingarchDesign& design,
                             const HyperIngarch& hyper);

/// Same posterior but with the feedback terms b_k(t/T) * lambda_{t-k} reading
/// from the fixed path `frozen` (length T+1) instead of re-running the
/// recursion. Differencing this in beta/theta/eta/delta reproduces what the
/// analytic gradient computes, which treats the lambda history as data.
double log_posterior_frozen_history(const TvbingarchParams& params,
                                    const TvbingarchDesign& design, const HyperIngarch& hyper,
                                    const Eigen::VectorXd& frozen);

struct TvbingarchGrad {
  Eigen::VectorXd beta;
  Eigen::MatrixXd theta;
  Eigen::MatrixXd eta;
  Eigen::VectorXd delta;
  double lambda0 = 0.0;
};

/// Gradient blocks in ascent direction. beta/theta/eta/delta use the analytic
/// forms with the current lambda path plugged in as data; lambda0 uses a
/// central finite difference of the exact log_posterior_ingarch with step
/// h = max(1e-4, 1e-4 * lambda0), shrunk to lambda0/2 if it would cross zero.
/// Pass with_lambda0=false to skip the two posterior evaluations that
/// difference costs when only the analytic blocks are needed.
TvbingarchGrad grad_log_posterior_ingarch(const TvbingarchParams& params,
                                          const TvbingarchDesign& design,
                                          const HyperIngarch& hyper, bool with_lambda0 = true);

/// Same initialization idea as the TVBARC model, with lambda0 started at the
/// sample mean (floored at 1).
TvbingarchParams initial_params_ingarch(const TvbingarchDesign& design);

}  // namespace tvb
