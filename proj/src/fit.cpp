#include "tvb/fit.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace tvb {

namespace {

std::vector<int> index_range(int first, int count) {
  std::vector<int> idx(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) idx[static_cast<std::size_t>(i)] = first + i;
  return idx;
}

void check_length(const Eigen::VectorXd& position, int dim, const char* who) {
  if (position.size() != dim)
    throw std::invalid_argument(std::string(who) + ": position has length " +
                                std::to_string(position.size()) + ", expected " +
                                std::to_string(dim));
}

// Simplex weight column w_index of softmax(delta) for every draw row.
Eigen::ArrayXd softmax_column(const Eigen::MatrixXd& delta_draws, int w_index) {
  Eigen::ArrayXd max = delta_draws.rowwise().maxCoeff();
  Eigen::ArrayXXd shifted = delta_draws.array().colwise() - max;
  Eigen::ArrayXXd w = shifted.exp();
  return w.col(w_index) / w.rowwise().sum();
}

}  // namespace

Eigen::VectorXd TvbarcLayout::flatten(const TvbarcParams& params) const {
  Eigen::VectorXd v(dim());
  v.head(K) = params.beta;
  for (int i = 0; i < p; ++i) v.segment(theta_offset() + i * K, K) = params.theta.row(i);
  v.tail(p + 1) = params.delta;
  return v;
}

TvbarcParams TvbarcLayout::unflatten(const Eigen::VectorXd& position) const {
  check_length(position, dim(), "TvbarcLayout::unflatten");
  TvbarcParams params;
  params.beta = position.head(K);
  params.theta.resize(p, K);
  for (int i = 0; i < p; ++i) params.theta.row(i) = position.segment(theta_offset() + i * K, K);
  params.delta = position.tail(p + 1);
  return params;
}

std::vector<std::string> TvbarcLayout::names() const {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(dim()));
  for (int j = 1; j <= K; ++j) out.push_back("beta_" + std::to_string(j));
  for (int i = 1; i <= p; ++i)
    for (int j = 1; j <= K; ++j)
      out.push_back("theta_" + std::to_string(i) + "_" + std::to_string(j));
  for (int l = 0; l <= p; ++l) out.push_back("delta_" + std::to_string(l));
  return out;
}

Eigen::VectorXd TvbingarchLayout::flatten(const TvbingarchParams& params) const {
  Eigen::VectorXd v(dim());
  v.head(K) = params.beta;
  for (int i = 0; i < p; ++i) v.segment(theta_offset() + i * K, K) = params.theta.row(i);
  for (int k = 0; k < q; ++k) v.segment(eta_offset() + k * K, K) = params.eta.row(k);
  v.segment(delta_offset(), p + q + 1) = params.delta;
  v(log_lambda0_index()) = std::log(params.lambda0);
  return v;
}

TvbingarchParams TvbingarchLayout::unflatten(const Eigen::VectorXd& position) const {
  check_length(position, dim(), "TvbingarchLayout::unflatten");
  TvbingarchParams params;
  params.beta = position.head(K);
  params.theta.resize(p, K);
  for (int i = 0; i < p; ++i) params.theta.row(i) = position.segment(theta_offset() + i * K, K);
  params.eta.resize(q, K);
  for (int k = 0; k < q; ++k) params.eta.row(k) = position.segment(eta_offset() + k * K, K);
  params.delta = position.segment(delta_offset(), p + q + 1);
  params.lambda0 = std::exp(position(log_lambda0_index()));
  return params;
}

std::vector<std::string> TvbingarchLayout::names() const {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(dim()));
  for (int j = 1; j <= K; ++j) out.push_back("beta_" + std::to_string(j));
  for (int i = 1; i <= p; ++i)
    for (int j = 1; j <= K; ++j)
      out.push_back("theta_" + std::to_string(i) + "_" + std::to_string(j));
  for (int k = 1; k <= q; ++k)
    for (int j = 1; j <= K; ++j)
      out.push_back("eta_" + std::to_string(k) + "_" + std::to_string(j));
  for (int l = 0; l <= p + q; ++l) out.push_back("delta_" + std::to_string(l));
  out.push_back("lambda0");
  return out;
}

TvbarcTarget::TvbarcTarget(TvbarcDesign design, Hyper hyper)
    : design_(std::move(design)), hyper_(hyper) {
  layout_.K = design_.basis().num_basis();
  layout_.p = design_.p();
  blocks_.push_back({"beta", index_range(layout_.beta_offset(), layout_.K)});
  if (layout_.p > 0) {
    blocks_.push_back({"theta", index_range(layout_.theta_offset(), layout_.p * layout_.K)});
    blocks_.push_back({"delta", index_range(layout_.delta_offset(), layout_.p + 1)});
  }
}

Eigen::VectorXd TvbarcTarget::initial_position() const {
  return layout_.flatten(initial_params(design_));
}

double TvbarcTarget::log_density(const Eigen::VectorXd& position) const {
  return log_posterior(layout_.unflatten(position), design_, hyper_);
}

Eigen::VectorXd TvbarcTarget::block_gradient(const Eigen::VectorXd& position,
                                             std::size_t block_id) const {
  TvbarcGrad g = grad_log_posterior(layout_.unflatten(position), design_, hyper_);
  Eigen::VectorXd flat = layout_.flatten(TvbarcParams{g.beta, g.theta, g.delta});
  const std::vector<int>& idx = blocks_.at(block_id).indices;
  Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = flat(idx[i]);
  return out;
}

void TvbarcTarget::clamp(Eigen::VectorXd& position) const {
  const int count = layout_.p * layout_.K;
  if (count > 0) {
    auto seg = position.segment(layout_.theta_offset(), count);
    seg = seg.cwiseMax(0.0).cwiseMin(1.0);
  }
}

Eigen::VectorXd TvbarcTarget::intensity_path(const Eigen::VectorXd& draw) const {
  return intensities(layout_.unflatten(draw), design_);
}

std::string TvbarcTarget::function_name(int f) const {
  if (f == 0) return "mu";
  if (f >= 1 && f <= layout_.p) return "a" + std::to_string(f);
  throw std::invalid_argument("TvbarcTarget: no coefficient function with index " +
                              std::to_string(f));
}

Eigen::MatrixXd TvbarcTarget::function_draws(const Eigen::MatrixXd& draws, int f,
                                             const Eigen::VectorXd& grid) const {
  if (draws.cols() != layout_.dim())
    throw std::invalid_argument("TvbarcTarget::function_draws: wrong draw width");
  Eigen::MatrixXd basis_t = design_.basis().rows_at(grid).transpose();  // K x G
  if (f == 0)
    return draws.middleCols(layout_.beta_offset(), layout_.K).array().exp().matrix() * basis_t;
  if (f < 1 || f > layout_.p)
    throw std::invalid_argument("TvbarcTarget: no coefficient function with index " +
                                std::to_string(f));
  Eigen::MatrixXd abar =
      draws.middleCols(layout_.theta_offset() + (f - 1) * layout_.K, layout_.K) * basis_t;
  Eigen::ArrayXd weight =
      softmax_column(draws.middleCols(layout_.delta_offset(), layout_.p + 1), f);
  return (abar.array().colwise() * weight).matrix();
}

TvbingarchTarget::TvbingarchTarget(TvbingarchDesign design, HyperIngarch hyper)
    : design_(std::move(design)), hyper_(hyper) {
  layout_.K = design_.basis().num_basis();
  layout_.p = design_.p();
  layout_.q = design_.q();
  blocks_.push_back({"beta", index_range(layout_.beta_offset(), layout_.K)});
  std::vector<int> joint = index_range(layout_.theta_offset(), layout_.dim() - layout_.K);
  blocks_.push_back({"arch", std::move(joint)});
}

Eigen::VectorXd TvbingarchTarget::initial_position() const {
  return layout_.flatten(initial_params_ingarch(design_));
}

double TvbingarchTarget::log_density(const Eigen::VectorXd& position) const {
  const double log_lambda0 = position(layout_.log_lambda0_index());
  // + log_lambda0 is the Jacobian of sampling lambda0 on log scale.
  return log_posterior_ingarch(layout_.unflatten(position), design_, hyper_) + log_lambda0;
}

Eigen::VectorXd TvbingarchTarget::block_gradient(const Eigen::VectorXd& position,
                                                 std::size_t block_id) const {
  if (block_id >= blocks_.size())
    throw std::invalid_argument("TvbingarchTarget::block_gradient: bad block id");
  TvbingarchParams params = layout_.unflatten(position);
  const bool joint = block_id == 1;
  TvbingarchGrad g = grad_log_posterior_ingarch(params, design_, hyper_, joint);
  if (!joint) return g.beta;

  const int k = layout_.K;
  Eigen::VectorXd out(layout_.dim() - k);
  int at = 0;
  for (int i = 0; i < layout_.p; ++i, at += k) out.segment(at, k) = g.theta.row(i);
  for (int j = 0; j < layout_.q; ++j, at += k) out.segment(at, k) = g.eta.row(j);
  out.segment(at, layout_.p + layout_.q + 1) = g.delta;
  // Chain rule through lambda0 = exp(u), plus the +1 from the log-scale
  // Jacobian term in log_density.
  out(out.size() - 1) = g.lambda0 * params.lambda0 + 1.0;
  return out;
}

void TvbingarchTarget::clamp(Eigen::VectorXd& position) const {
  const int count = (layout_.p + layout_.q) * layout_.K;
  if (count > 0) {
    auto seg = position.segment(layout_.theta_offset(), count);
    seg = seg.cwiseMax(0.0).cwiseMin(1.0);
  }
}

Eigen::VectorXd TvbingarchTarget::intensity_path(const Eigen::VectorXd& draw) const {
  return intensities_recursive(layout_.unflatten(draw), design_).tail(design_.n_terms());
}

std::string TvbingarchTarget::function_name(int f) const {
  if (f == 0) return "mu";
  if (f >= 1 && f <= layout_.p) return "a" + std::to_string(f);
  if (f > layout_.p && f <= layout_.p + layout_.q) return "b" + std::to_string(f - layout_.p);
  throw std::invalid_argument("TvbingarchTarget: no coefficient function with index " +
                              std::to_string(f));
}

Eigen::MatrixXd TvbingarchTarget::function_draws(const Eigen::MatrixXd& draws, int f,
                                                 const Eigen::VectorXd& grid) const {
  if (draws.cols() != layout_.dim())
    throw std::invalid_argument("TvbingarchTarget::function_draws: wrong draw width");
  Eigen::MatrixXd basis_t = design_.basis().rows_at(grid).transpose();  // K x G
  if (f == 0)
    return draws.middleCols(layout_.beta_offset(), layout_.K).array().exp().matrix() * basis_t;
  if (f < 1 || f > layout_.p + layout_.q)
    throw std::invalid_argument("TvbingarchTarget: no coefficient function with index " +
                                std::to_string(f));
  const int col_offset = f <= layout_.p
                             ? layout_.theta_offset() + (f - 1) * layout_.K
                             : layout_.eta_offset() + (f - layout_.p - 1) * layout_.K;
  Eigen::MatrixXd cbar = draws.middleCols(col_offset, layout_.K) * basis_t;
  Eigen::ArrayXd weight = softmax_column(
      draws.middleCols(layout_.delta_offset(), layout_.p + layout_.q + 1), f);
  return (cbar.array().colwise() * weight).matrix();
}

Eigen::VectorXd observation_grid(int t_start, int horizon) {
  if (horizon < 1 || t_start < 0 || t_start > horizon)
    throw std::invalid_argument("observation_grid: need 0 <= t_start <= horizon, horizon >= 1");
  Eigen::VectorXd grid(horizon - t_start + 1);
  for (int t = t_start; t <= horizon; ++t)
    grid(t - t_start) = static_cast<double>(t) / static_cast<double>(horizon);
  return grid;
}

}  // namespace tvb
