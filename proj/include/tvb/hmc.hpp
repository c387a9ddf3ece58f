#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace tvb {

/// Sampler settings. Step sizes adapt every adapt_interval iterations during
/// burn-in only (rate below the target band shrinks the step, above grows it)
/// and stay frozen afterwards unless adapt_after_burn_in is set.
struct HmcConfig {
  int leapfrog_steps = 30;
  double initial_step_size = 1e-3;
  double target_accept_low = 0.6;
  double target_accept_high = 0.8;
  int adapt_interval = 100;
  int iterations = 10000;
  int burn_in = 5000;
  std::uint64_t seed = 0;
  double step_decrease = 0.8;
  double step_increase = 1.25;
  double min_step_size = 1e-10;
  /// Clamp box-constrained coordinates after every leapfrog position update;
  /// when false only the final proposal is mapped back to the boundary.
  bool clamp_each_step = true;
  bool adapt_after_burn_in = false;
};

/// A named group of coordinates updated together in one Metropolis step.
struct Block {
  std::string name;
  std::vector<int> indices;
};

/// Sampling target over a flat coordinate vector. Implementations expose the
/// log density, per-block ascent gradients, and a projection that maps
/// box-constrained coordinates back inside their bounds.
class Target {
 public:
  virtual ~Target() = default;
  virtual int dim() const = 0;
  virtual const std::vector<Block>& blocks() const = 0;
  virtual Eigen::VectorXd initial_position() const = 0;
  virtual double log_density(const Eigen::VectorXd& position) const = 0;
  /// Gradient of log_density restricted to blocks()[block_id], evaluated at
  /// the full position vector.
  virtual Eigen::VectorXd block_gradient(const Eigen::VectorXd& position,
                                         std::size_t block_id) const = 0;
  /// Map any out-of-box coordinates to the nearest boundary point. Default:
  /// nothing is box-constrained.
  virtual void clamp(Eigen::VectorXd& position) const { (void)position; }
  virtual std::vector<std::string> coordinate_names() const;
};

struct LeapfrogResult {
  Eigen::VectorXd position;
  Eigen::VectorXd momentum;
  bool ok = true;  // false if a non-finite gradient aborted the trajectory
};

/// Standard leapfrog integrator: half momentum kick, n_steps position/momentum
/// alternation, final half kick. `project` (optional) is applied to the
/// position after every drift.
LeapfrogResult leapfrog(const Eigen::VectorXd& position, const Eigen::VectorXd& momentum,
                        double step, int n_steps,
                        const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad,
                        const std::function<void(Eigen::VectorXd&)>& project = nullptr);

/// One adaptation decision: shrink below the band, grow above it, keep inside.
double adapt_step_size(double current, double recent_accept_rate, const HmcConfig& config);

/// One HMC Metropolis update of a single block; returns whether the proposal
/// was accepted (position is modified in place only on acceptance). Non-finite
/// gradients or energies count as rejection.
bool hmc_update_block(const Target& target, std::size_t block_id, Eigen::VectorXd& position,
                      double step, const HmcConfig& config, std::mt19937_64& rng);

/// Full sampling record: one row of `draws` per iteration (after all block
/// updates), with per-block acceptance flags and the step size in force.
struct Chain {
  Eigen::MatrixXd draws;  // iterations x dim
  int burn_in = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> coordinate_names;
  std::vector<Block> blocks;
  std::vector<std::vector<std::uint8_t>> accept_history;  // [block][iteration]
  std::vector<std::vector<double>> step_size_history;     // [block][iteration]

  Eigen::Index n_draws() const { return draws.rows(); }
  Eigen::Index n_post() const { return draws.rows() - burn_in; }
  /// Post-burn-in draws, one row per retained iteration.
  Eigen::Block<const Eigen::MatrixXd> post_draws() const {
    return draws.bottomRows(n_post());
  }
  /// Fraction of accepted proposals for one block over [from, to).
  double acceptance_rate(std::size_t block_id, Eigen::Index from, Eigen::Index to) const;
  /// Acceptance over the post-burn-in stretch.
  double post_acceptance_rate(std::size_t block_id) const {
    return acceptance_rate(block_id, burn_in, n_draws());
  }
};

/// Run the block HMC sampler for config.iterations sweeps. Throws if a block
/// accepts nothing over a full adaptation window while already at the minimum
/// step size (the chain would be stuck).
Chain run_chain(const Target& target, const HmcConfig& config);

}  // namespace tvb
