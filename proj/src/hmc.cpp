#include "tvb/hmc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace tvb {

std::vector<std::string> Target::coordinate_names() const {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(dim()));
  for (int i = 0; i < dim(); ++i) names.push_back("x" + std::to_string(i));
  return names;
}

LeapfrogResult leapfrog(const Eigen::VectorXd& position, const Eigen::VectorXd& momentum,
                        double step, int n_steps,
                        const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad,
                        const std::function<void(Eigen::VectorXd&)>& project) {
  if (position.size() != momentum.size())
    throw std::invalid_argument("leapfrog: position/momentum size mismatch");
  if (n_steps < 1) throw std::invalid_argument("leapfrog: n_steps must be >= 1");
  LeapfrogResult out{position, momentum, true};

  Eigen::VectorXd g = grad(out.position);
  if (!g.allFinite()) return {position, momentum, false};
  out.momentum += 0.5 * step * g;
  for (int i = 0; i < n_steps; ++i) {
    out.position += step * out.momentum;
    if (project) project(out.position);
    g = grad(out.position);
    if (!g.allFinite()) return {position, momentum, false};
    out.momentum += (i + 1 < n_steps ? step : 0.5 * step) * g;
  }
  return out;
}

double adapt_step_size(double current, double recent_accept_rate, const HmcConfig& config) {
  if (recent_accept_rate < config.target_accept_low) return current * config.step_decrease;
  if (recent_accept_rate > config.target_accept_high) return current * config.step_increase;
  return current;
}

bool hmc_update_block(const Target& target, std::size_t block_id, Eigen::VectorXd& position,
                      double step, const HmcConfig& config, std::mt19937_64& rng) {
  const std::vector<Block>& blocks = target.blocks();
  if (block_id >= blocks.size()) throw std::invalid_argument("hmc_update_block: bad block id");
  const std::vector<int>& idx = blocks[block_id].indices;
  const auto m = static_cast<Eigen::Index>(idx.size());
  if (m == 0) return true;

  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd momentum(m);
  for (Eigen::Index i = 0; i < m; ++i) momentum(i) = normal(rng);

  Eigen::VectorXd sub(m);
  for (Eigen::Index i = 0; i < m; ++i) sub(i) = position(idx[i]);

  // The leapfrog trajectory moves only this block; gradient and projection
  // closures scatter the subvector back into a full position first.
  Eigen::VectorXd work = position;
  auto scatter = [&idx, m](const Eigen::VectorXd& s, Eigen::VectorXd& full) {
    for (Eigen::Index i = 0; i < m; ++i) full(idx[i]) = s(i);
  };
  auto grad = [&](const Eigen::VectorXd& s) {
    scatter(s, work);
    return target.block_gradient(work, block_id);
  };
  std::function<void(Eigen::VectorXd&)> project;
  if (config.clamp_each_step) {
    project = [&](Eigen::VectorXd& s) {
      scatter(s, work);
      target.clamp(work);
      for (Eigen::Index i = 0; i < m; ++i) s(i) = work(idx[i]);
    };
  }

  const double current_ld = target.log_density(position);
  LeapfrogResult traj = leapfrog(sub, momentum, step, config.leapfrog_steps, grad, project);
  if (!traj.ok) return false;

  Eigen::VectorXd proposal = position;
  scatter(traj.position, proposal);
  target.clamp(proposal);  // final boundary mapping (no-op if already clamped)
  const double proposal_ld = target.log_density(proposal);

  const double log_accept = (proposal_ld - current_ld) -
                            0.5 * (traj.momentum.squaredNorm() - momentum.squaredNorm());
  if (!std::isfinite(proposal_ld) && !(proposal_ld == -std::numeric_limits<double>::infinity()))
    return false;  // NaN energy: treat as rejection
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (std::log(unif(rng)) < log_accept) {
    position = std::move(proposal);
    return true;
  }
  return false;
}

double Chain::acceptance_rate(std::size_t block_id, Eigen::Index from, Eigen::Index to) const {
  if (block_id >= accept_history.size())
    throw std::invalid_argument("Chain::acceptance_rate: bad block id");
  if (from < 0 || to > n_draws() || from >= to)
    throw std::invalid_argument("Chain::acceptance_rate: bad iteration range");
  long hits = 0;
  for (Eigen::Index i = from; i < to; ++i) hits += accept_history[block_id][i];
  return static_cast<double>(hits) / static_cast<double>(to - from);
}

Chain run_chain(const Target& target, const HmcConfig& config) {
  if (config.iterations < 1 || config.burn_in < 0 || config.burn_in >= config.iterations)
    throw std::invalid_argument("run_chain: need 0 <= burn_in < iterations");
  if (!(config.target_accept_low > 0.0 && config.target_accept_low < config.target_accept_high &&
        config.target_accept_high < 1.0))
    throw std::invalid_argument("run_chain: need 0 < accept_low < accept_high < 1");
  if (config.adapt_interval < 1 || config.leapfrog_steps < 1 ||
      !(config.initial_step_size > 0.0))
    throw std::invalid_argument("run_chain: nonpositive sampler setting");

  const std::vector<Block> blocks = target.blocks();
  const std::size_t n_blocks = blocks.size();
  std::mt19937_64 rng(config.seed);
  Eigen::VectorXd position = target.initial_position();
  if (position.size() != target.dim())
    throw std::invalid_argument("run_chain: initial position has wrong dimension");

  Chain chain;
  chain.burn_in = config.burn_in;
  chain.seed = config.seed;
  chain.coordinate_names = target.coordinate_names();
  chain.blocks = blocks;
  chain.draws.resize(config.iterations, target.dim());
  chain.accept_history.assign(n_blocks, std::vector<std::uint8_t>(config.iterations, 0));
  chain.step_size_history.assign(n_blocks, std::vector<double>(config.iterations, 0.0));

  std::vector<double> step(n_blocks, config.initial_step_size);
  std::vector<int> window_hits(n_blocks, 0);
  for (int it = 0; it < config.iterations; ++it) {
    for (std::size_t b = 0; b < n_blocks; ++b) {
      const bool accepted = hmc_update_block(target, b, position, step[b], config, rng);
      chain.accept_history[b][it] = accepted ? 1 : 0;
      chain.step_size_history[b][it] = step[b];
      window_hits[b] += accepted ? 1 : 0;
    }
    const bool adapting = it < config.burn_in || config.adapt_after_burn_in;
    if ((it + 1) % config.adapt_interval == 0) {
      for (std::size_t b = 0; b < n_blocks; ++b) {
        const double rate =
            static_cast<double>(window_hits[b]) / static_cast<double>(config.adapt_interval);
        if (rate == 0.0 && step[b] <= config.min_step_size)
          throw std::runtime_error("run_chain: block '" + blocks[b].name +
                                   "' accepted nothing over a full adaptation window at the "
                                   "minimum step size");
        if (adapting)
          step[b] = std::max(adapt_step_size(step[b], rate, config), config.min_step_size);
        window_hits[b] = 0;
      }
    }
    chain.draws.row(it) = position;
  }
  return chain;
}

}  // namespace tvb
