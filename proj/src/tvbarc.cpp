#include "tvb/tvbarc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tvb {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_shapes(const TvbarcParams& params, const TvbarcDesign& design) {
  const auto k = static_cast<Eigen::Index>(design.basis().num_basis());
  if (params.beta.size() != k)
    throw std::invalid_argument("tvbarc: beta has length " + std::to_string(params.beta.size()) +
                                ", basis has " + std::to_string(k) + " functions");
  if (params.theta.rows() != design.p() || params.theta.cols() != k)
    throw std::invalid_argument("tvbarc: theta must be p x K = " + std::to_string(design.p()) +
                                " x " + std::to_string(k));
  if (params.delta.size() != design.p() + 1)
    throw std::invalid_argument("tvbarc: delta must have length p+1 = " +
                                std::to_string(design.p() + 1));
}

bool theta_in_box(const Eigen::MatrixXd& theta) {
  return theta.size() == 0 || (theta.minCoeff() >= 0.0 && theta.maxCoeff() <= 1.0);
}

}  // namespace

Eigen::VectorXd simplex_weights(const Eigen::VectorXd& delta) {
  if (delta.size() == 0) throw std::invalid_argument("simplex_weights: empty delta");
  Eigen::ArrayXd shifted = delta.array() - delta.maxCoeff();
  Eigen::ArrayXd w = shifted.exp();
  return (w / w.sum()).matrix();
}

CoefficientValues coefficient_at(const TvbarcParams& params, const SplineBasis& basis, double x) {
  if (!theta_in_box(params.theta))
    throw std::invalid_argument("coefficient_at: theta entries must lie in [0,1]");
  Eigen::VectorXd b = basis.eval(x);
  Eigen::VectorXd m = simplex_weights(params.delta);
  CoefficientValues out;
  out.mu = params.beta.array().exp().matrix().dot(b);
  out.a = (params.theta * b).cwiseProduct(m.tail(params.theta.rows()));
  return out;
}

TvbarcDesign::TvbarcDesign(CountSeries series, SplineBasis basis, int p)
    : series_(std::move(series)), basis_(std::move(basis)), p_(p) {
  if (p < 0) throw std::invalid_argument("TvbarcDesign: lag order p must be >= 0");
  const Eigen::Index len = series_.length();
  if (len < p + 1)
    throw std::invalid_argument("TvbarcDesign: series of length " + std::to_string(len) +
                                " is too short for lag order " + std::to_string(p));
  const Eigen::Index horizon = series_.horizon();
  const double denom = horizon > 0 ? static_cast<double>(horizon) : 1.0;
  const auto k = static_cast<Eigen::Index>(basis_.num_basis());

  basis_all_.resize(len, k);
  for (Eigen::Index t = 0; t < len; ++t)
    basis_all_.row(t) = basis_.eval(static_cast<double>(t) / denom).transpose();

  const Eigen::Index n = len - p;
  basis_obs_ = basis_all_.bottomRows(n);
  Eigen::VectorXd xs = series_.as_real();
  x_obs_ = xs.tail(n);
  x_lag_.resize(n, p);
  for (int i = 1; i <= p; ++i) x_lag_.col(i - 1) = xs.segment(p - i, n);
}

Eigen::VectorXd intensities(const TvbarcParams& params, const TvbarcDesign& design) {
  check_shapes(params, design);
  Eigen::VectorXd lambda = design.basis_obs() * params.beta.array().exp().matrix();
  if (design.p() > 0) {
    Eigen::VectorXd m = simplex_weights(params.delta);
    Eigen::MatrixXd abar = design.basis_obs() * params.theta.transpose();  // n x p
    lambda += abar.cwiseProduct(design.x_lag()) * m.tail(design.p());
  }
  return lambda;
}

Eigen::VectorXd poisson_terms(const Eigen::VectorXd& lambda, const Eigen::VectorXd& x) {
  if (lambda.size() != x.size())
    throw std::invalid_argument("poisson_terms: length mismatch");
  // The x=0 branch avoids 0 * log(0) turning an underflowed intensity into NaN.
  Eigen::ArrayXd xlog = (x.array() > 0.0).select(x.array() * lambda.array().log(), 0.0);
  return (xlog - lambda.array()).matrix();
}

double log_posterior(const TvbarcParams& params, const TvbarcDesign& design, const Hyper& hyper) {
  check_shapes(params, design);
  if (!theta_in_box(params.theta)) return kNegInf;
  const double loglik = poisson_terms(intensities(params, design), design.x_obs()).sum();
  const double prior = -params.beta.squaredNorm() / (2.0 * hyper.c2) -
                       params.delta.squaredNorm() / (2.0 * hyper.c1);
  return loglik + prior;
}

TvbarcGrad grad_log_posterior(const TvbarcParams& params, const TvbarcDesign& design,
                              const Hyper& hyper) {
  check_shapes(params, design);
  const int p = design.p();
  Eigen::VectorXd m = simplex_weights(params.delta);
  Eigen::VectorXd lambda = design.basis_obs() * params.beta.array().exp().matrix();
  Eigen::MatrixXd abar;  // n x p, rows hold theta_i . B(t/T)
  if (p > 0) {
    abar = design.basis_obs() * params.theta.transpose();
    lambda += abar.cwiseProduct(design.x_lag()) * m.tail(p);
  }
  Eigen::VectorXd r = design.x_obs().cwiseQuotient(lambda).array() - 1.0;

  TvbarcGrad g;
  g.beta = params.beta.array().exp() * (design.basis_obs().transpose() * r).array();
  g.beta -= params.beta / hyper.c2;

  g.theta.resize(p, params.theta.cols());
  g.delta = -params.delta / hyper.c1;
  if (p > 0) {
    Eigen::MatrixXd weighted = design.x_lag().array().colwise() * r.array();  // n x p
    Eigen::MatrixXd gtheta = (design.basis_obs().transpose() * weighted).transpose();  // p x K
    g.theta = gtheta.array().colwise() * m.tail(p).array();
    Eigen::VectorXd s = abar.cwiseProduct(design.x_lag()).transpose() * r;  // length p
    const double total = m.tail(p).dot(s);
    Eigen::VectorXd s_full = Eigen::VectorXd::Zero(p + 1);
    s_full.tail(p) = s;
    g.delta += m.cwiseProduct(s_full) - total * m;
  }
  return g;
}

TvbarcParams initial_params(const TvbarcDesign& design) {
  const auto k = static_cast<Eigen::Index>(design.basis().num_basis());
  const double mean_x = design.series().as_real().mean();
  TvbarcParams params;
  params.beta = Eigen::VectorXd::Constant(
      k, std::log(std::max(mean_x, 1.0)) - std::log(static_cast<double>(k)));
  params.theta = Eigen::MatrixXd::Constant(design.p(), k, 0.5);
  params.delta = Eigen::VectorXd::Zero(design.p() + 1);
  return params;
}

}  // namespace tvb
