#pragma once

#include <string>
#include <vector>

#include "tvb/evaluation.hpp"
#include "tvb/hmc.hpp"
#include "tvb/tvbarc.hpp"
#include "tvb/tvbingarch.hpp"

namespace tvb {

/// Flat coordinate order for TVBARC draws: beta, theta rows, delta.
struct TvbarcLayout {
  int K = 0;
  int p = 0;

  int dim() const { return K + p * K + p + 1; }
  int beta_offset() const { return 0; }
  int theta_offset() const { return K; }
  int delta_offset() const { return K + p * K; }

  Eigen::VectorXd flatten(const TvbarcParams& params) const;
  TvbarcParams unflatten(const Eigen::VectorXd& position) const;
  std::vector<std::string> names() const;
};

/// Flat coordinate order for TVBINGARCH draws: beta, theta rows, eta rows,
/// delta, then log(lambda0). The last coordinate is sampled on log scale so
/// proposals stay positive; unflatten applies exp.
struct TvbingarchLayout {
  int K = 0;
  int p = 0;
  int q = 0;

  int dim() const { return K + (p + q) * K + (p + q + 1) + 1; }
  int beta_offset() const { return 0; }
  int theta_offset() const { return K; }
  int eta_offset() const { return K + p * K; }
  int delta_offset() const { return K + (p + q) * K; }
  int log_lambda0_index() const { return dim() - 1; }

  Eigen::VectorXd flatten(const TvbingarchParams& params) const;
  TvbingarchParams unflatten(const Eigen::VectorXd& position) const;
  std::vector<std::string> names() const;
};

/// TVBARC posterior as an HMC target (blocks beta / theta / delta, the latter
/// two only when p > 0) and as a draw evaluator for AMSE and bands.
class TvbarcTarget : public Target, public DrawEvaluator {
 public:
  TvbarcTarget(TvbarcDesign design, Hyper hyper);

  const TvbarcDesign& design() const { return design_; }
  const TvbarcLayout& layout() const { return layout_; }

  int dim() const override { return layout_.dim(); }
  const std::vector<Block>& blocks() const override { return blocks_; }
  Eigen::VectorXd initial_position() const override;
  double log_density(const Eigen::VectorXd& position) const override;
  Eigen::VectorXd block_gradient(const Eigen::VectorXd& position,
                                 std::size_t block_id) const override;
  void clamp(Eigen::VectorXd& position) const override;
  std::vector<std::string> coordinate_names() const override { return layout_.names(); }

  Eigen::VectorXd intensity_path(const Eigen::VectorXd& draw) const override;
  Eigen::VectorXd observed() const override { return design_.x_obs(); }
  int n_functions() const override { return 1 + layout_.p; }
  std::string function_name(int f) const override;
  Eigen::MatrixXd function_draws(const Eigen::MatrixXd& draws, int f,
                                 const Eigen::VectorXd& grid) const override;

  /// Sampler-scale columns that chain files store as natural values (none).
  std::vector<int> natural_exp_columns() const { return {}; }

 private:
  TvbarcDesign design_;
  Hyper hyper_;
  TvbarcLayout layout_;
  std::vector<Block> blocks_;
};

/// TVBINGARCH posterior as an HMC target. Per the block update rule, beta is
/// one block and all lag-structure parameters (theta, eta, delta, log lambda0)
/// form a single joint block.
class TvbingarchTarget : public Target, public DrawEvaluator {
 public:
  TvbingarchTarget(TvbingarchDesign design, HyperIngarch hyper);

  const TvbingarchDesign& design() const { return design_; }
  const TvbingarchLayout& layout() const { return layout_; }

  int dim() const override { return layout_.dim(); }
  const std::vector<Block>& blocks() const override { return blocks_; }
  Eigen::VectorXd initial_position() const override;
  double log_density(const Eigen::VectorXd& position) const override;
  Eigen::VectorXd block_gradient(const Eigen::VectorXd& position,
                                 std::size_t block_id) const override;
  void clamp(Eigen::VectorXd& position) const override;
  std::vector<std::string> coordinate_names() const override { return layout_.names(); }

  Eigen::VectorXd intensity_path(const Eigen::VectorXd& draw) const override;
  Eigen::VectorXd observed() const override { return design_.x_obs(); }
  int n_functions() const override { return 1 + layout_.p + layout_.q; }
  std::string function_name(int f) const override;
  Eigen::MatrixXd function_draws(const Eigen::MatrixXd& draws, int f,
                                 const Eigen::VectorXd& grid) const override;

  /// The log(lambda0) coordinate is written to chain files as exp(value).
  std::vector<int> natural_exp_columns() const { return {layout_.log_lambda0_index()}; }

 private:
  TvbingarchDesign design_;
  HyperIngarch hyper_;
  TvbingarchLayout layout_;
  std::vector<Block> blocks_;
};

/// The observation grid used for bands and reports: t/T for the fitted range.
Eigen::VectorXd observation_grid(int t_start, int horizon);

}  // namespace tvb
