#include "tvb/tvbingarch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tvb {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_shapes(const TvbingarchParams& params, const TvbingarchDesign& design) {
  const auto k = static_cast<Eigen::Index>(design.basis().num_basis());
  if (params.beta.size() != k)
    throw std::invalid_argument("tvbingarch: beta has length " +
                                std::to_string(params.beta.size()) + ", basis has " +
                                std::to_string(k) + " functions");
  if (params.theta.rows() != design.p() || params.theta.cols() != k)
    throw std::invalid_argument("tvbingarch: theta must be p x K = " +
                                std::to_string(design.p()) + " x " + std::to_string(k));
  if (params.eta.rows() != design.q() || params.eta.cols() != k)
    throw std::invalid_argument("tvbingarch: eta must be q x K = " + std::to_string(design.q()) +
                                " x " + std::to_string(k));
  if (params.delta.size() != design.p() + design.q() + 1)
    throw std::invalid_argument("tvbingarch: delta must have length p+q+1 = " +
                                std::to_string(design.p() + design.q() + 1));
}

bool in_unit_box(const Eigen::MatrixXd& m) {
  return m.size() == 0 || (m.minCoeff() >= 0.0 && m.maxCoeff() <= 1.0);
}

// Column i-1 holds path(t-i) for t = 1..T, zero where t-i < 0.
Eigen::MatrixXd lagged_paths(const Eigen::VectorXd& path, Eigen::Index n, int order) {
  Eigen::MatrixXd lags = Eigen::MatrixXd::Zero(n, order);
  for (int i = 1; i <= order; ++i) {
    const Eigen::Index seg = std::max<Eigen::Index>(0, n - (i - 1));
    if (seg > 0) lags.col(i - 1).tail(seg) = path.head(seg);
  }
  return lags;
}

double lambda0_log_prior(double lambda0, double d1) {
  return -(d1 + 1.0) * std::log(lambda0) - d1 / lambda0;
}

}  // namespace

TvbingarchDesign::TvbingarchDesign(CountSeries series, SplineBasis basis, int p, int q)
    : series_(std::move(series)), basis_(std::move(basis)), p_(p), q_(q) {
  if (p < 0 || q < 0) throw std::invalid_argument("TvbingarchDesign: orders must be >= 0");
  const Eigen::Index len = series_.length();
  if (len < 2)
    throw std::invalid_argument("TvbingarchDesign: need at least 2 observations, got " +
                                std::to_string(len));
  const double horizon = static_cast<double>(series_.horizon());
  const auto k = static_cast<Eigen::Index>(basis_.num_basis());

  basis_all_.resize(len, k);
  for (Eigen::Index t = 0; t < len; ++t)
    basis_all_.row(t) = basis_.eval(static_cast<double>(t) / horizon).transpose();

  const Eigen::Index n = len - 1;
  basis_obs_ = basis_all_.bottomRows(n);
  Eigen::VectorXd xs = series_.as_real();
  x_obs_ = xs.tail(n);
  x_lag_ = lagged_paths(xs, n, p);
}

Eigen::VectorXd intensities_recursive(const TvbingarchParams& params,
                                      const TvbingarchDesign& design) {
  check_shapes(params, design);
  if (!(params.lambda0 > 0.0))
    throw std::invalid_argument("intensities_recursive: lambda0 must be positive");
  const int p = design.p();
  const int q = design.q();
  const Eigen::Index len = design.series().length();
  const Eigen::VectorXd m = simplex_weights(params.delta);

  // Everything except the feedback sum uses the same expressions as the
  // non-recursive model, so a model with eta == 0 reproduces those
  // intensities bit for bit.
  Eigen::VectorXd base = design.basis_obs() * params.beta.array().exp().matrix();
  if (p > 0)
    base += (design.basis_obs() * params.theta.transpose()).cwiseProduct(design.x_lag()) *
            m.segment(1, p);

  Eigen::MatrixXd b_path;  // n x q, b_k(t/T) for t = 1..T with simplex weight applied
  if (q > 0)
    b_path = (design.basis_obs() * params.eta.transpose()).array().rowwise() *
             m.segment(1 + p, q).transpose().array();

  Eigen::VectorXd lambda(len);
  lambda(0) = params.lambda0;
  for (Eigen::Index t = 1; t < len; ++t) {
    double v = base(t - 1);
    for (int k = 1; k <= q && k <= t; ++k) v += b_path(t - 1, k - 1) * lambda(t - k);
    lambda(t) = v;
  }
  return lambda;
}

double log_posterior_ingarch(const TvbingarchParams& params, const TvbingarchDesign& design,
                             const HyperIngarch& hyper) {
  check_shapes(params, design);
  if (!in_unit_box(params.theta) || !in_unit_box(params.eta) || !(params.lambda0 > 0.0))
    return kNegInf;
  Eigen::VectorXd lambda = intensities_recursive(params, design);
  const double loglik = poisson_terms(lambda.tail(design.n_terms()), design.x_obs()).sum();
  return loglik - params.beta.squaredNorm() / (2.0 * hyper.c2) -
         params.delta.squaredNorm() / (2.0 * hyper.c1) +
         lambda0_log_prior(params.lambda0, hyper.d1);
}

double log_posterior_frozen_history(const TvbingarchParams& params,
                                    const TvbingarchDesign& design, const HyperIngarch& hyper,
                                    const Eigen::VectorXd& frozen) {
  check_shapes(params, design);
  if (frozen.size() != design.series().length())
    throw std::invalid_argument("log_posterior_frozen_history: frozen path has wrong length");
  if (!in_unit_box(params.theta) || !in_unit_box(params.eta) || !(params.lambda0 > 0.0))
    return kNegInf;
  const int p = design.p();
  const int q = design.q();
  const Eigen::Index n = design.n_terms();
  const Eigen::VectorXd m = simplex_weights(params.delta);

  Eigen::VectorXd lambda = design.basis_obs() * params.beta.array().exp().matrix();
  if (p > 0)
    lambda += (design.basis_obs() * params.theta.transpose()).cwiseProduct(design.x_lag()) *
              m.segment(1, p);
  if (q > 0)
    lambda += (design.basis_obs() * params.eta.transpose())
                  .cwiseProduct(lagged_paths(frozen, n, q)) *
              m.segment(1 + p, q);

  const double loglik = poisson_terms(lambda, design.x_obs()).sum();
  return loglik - params.beta.squaredNorm() / (2.0 * hyper.c2) -
         params.delta.squaredNorm() / (2.0 * hyper.c1) +
         lambda0_log_prior(params.lambda0, hyper.d1);
}

TvbingarchGrad grad_log_posterior_ingarch(const TvbingarchParams& params,
                                          const TvbingarchDesign& design,
                                          const HyperIngarch& hyper, bool with_lambda0) {
  check_shapes(params, design);
  const int p = design.p();
  const int q = design.q();
  const Eigen::Index n = design.n_terms();
  const Eigen::VectorXd m = simplex_weights(params.delta);
  const Eigen::MatrixXd& basis = design.basis_obs();

  Eigen::VectorXd lambda_full = intensities_recursive(params, design);
  Eigen::VectorXd lambda = lambda_full.tail(n);
  Eigen::VectorXd r = design.x_obs().cwiseQuotient(lambda).array() - 1.0;

  TvbingarchGrad g;
  g.beta = params.beta.array().exp() * (basis.transpose() * r).array();
  g.beta -= params.beta / hyper.c2;

  Eigen::VectorXd s_full = Eigen::VectorXd::Zero(p + q + 1);
  g.theta.resize(p, params.theta.cols());
  if (p > 0) {
    Eigen::MatrixXd weighted = design.x_lag().array().colwise() * r.array();
    g.theta = (basis.transpose() * weighted).transpose().array().colwise() *
              m.segment(1, p).array();
    Eigen::MatrixXd abar = basis * params.theta.transpose();
    s_full.segment(1, p) = abar.cwiseProduct(design.x_lag()).transpose() * r;
  }
  g.eta.resize(q, params.eta.cols());
  if (q > 0) {
    Eigen::MatrixXd lambda_lag = lagged_paths(lambda_full, n, q);
    Eigen::MatrixXd weighted = lambda_lag.array().colwise() * r.array();
    g.eta = (basis.transpose() * weighted).transpose().array().colwise() *
            m.segment(1 + p, q).array();
    Eigen::MatrixXd bbar = basis * params.eta.transpose();
    s_full.segment(1 + p, q) = bbar.cwiseProduct(lambda_lag).transpose() * r;
  }
  const double total = m.dot(s_full);
  g.delta = m.cwiseProduct(s_full) - total * m - params.delta / hyper.c1;

  if (with_lambda0) {
    double h = std::max(1e-4, 1e-4 * params.lambda0);
    if (params.lambda0 - h <= 0.0) h = params.lambda0 / 2.0;
    TvbingarchParams up = params;
    TvbingarchParams down = params;
    up.lambda0 += h;
    down.lambda0 -= h;
    g.lambda0 = (log_posterior_ingarch(up, design, hyper) -
                 log_posterior_ingarch(down, design, hyper)) /
                (2.0 * h);
  }
  return g;
}

TvbingarchParams initial_params_ingarch(const TvbingarchDesign& design) {
  const auto k = static_cast<Eigen::Index>(design.basis().num_basis());
  const double mean_x = design.series().as_real().mean();
  TvbingarchParams params;
  params.beta = Eigen::VectorXd::Constant(
      k, std::log(std::max(mean_x, 1.0)) - std::log(static_cast<double>(k)));
  params.theta = Eigen::MatrixXd::Constant(design.p(), k, 0.5);
  params.eta = Eigen::MatrixXd::Constant(design.q(), k, 0.5);
  params.delta = Eigen::VectorXd::Zero(design.p() + design.q() + 1);
  params.lambda0 = std::max(mean_x, 1.0);
  return params;
}

}  // namespace tvb
