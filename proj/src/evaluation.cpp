#include "tvb/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tvb {

double interpolated_quantile(Eigen::VectorXd values, double prob) {
  if (values.size() == 0) throw std::invalid_argument("interpolated_quantile: empty input");
  if (prob < 0.0 || prob > 1.0)
    throw std::invalid_argument("interpolated_quantile: prob must lie in [0,1]");
  std::sort(values.begin(), values.end());
  const double h = prob * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<Eigen::Index>(std::floor(h));
  if (lo + 1 >= values.size()) return values(values.size() - 1);
  return values(lo) + (h - static_cast<double>(lo)) * (values(lo + 1) - values(lo));
}

double amse(const Chain& chain, const DrawEvaluator& model) {
  if (chain.n_post() <= 0) throw std::invalid_argument("amse: chain has no post-burn-in draws");
  const Eigen::VectorXd x = model.observed();
  const auto n = static_cast<double>(x.size());
  double total = 0.0;
  for (Eigen::Index s = chain.burn_in; s < chain.n_draws(); ++s) {
    const Eigen::VectorXd lambda = model.intensity_path(chain.draws.row(s));
    total += (x - lambda).squaredNorm() / n;
  }
  return total / static_cast<double>(chain.n_post());
}

CredibleBand credible_band(const Chain& chain, const DrawEvaluator& model, int f,
                           const Eigen::VectorXd& grid, double level) {
  if (chain.n_post() <= 0)
    throw std::invalid_argument("credible_band: chain has no post-burn-in draws");
  if (f < 0 || f >= model.n_functions())
    throw std::invalid_argument("credible_band: no coefficient function with index " +
                                std::to_string(f));
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument("credible_band: level must lie in (0,1)");
  if (grid.size() == 0) throw std::invalid_argument("credible_band: empty grid");
  for (Eigen::Index i = 1; i < grid.size(); ++i)
    if (!(grid(i) > grid(i - 1)))
      throw std::invalid_argument("credible_band: grid must be strictly increasing");

  const Eigen::MatrixXd values = model.function_draws(chain.post_draws(), f, grid);
  const double tail = (1.0 - level) / 2.0;
  CredibleBand band;
  band.grid = grid;
  band.level = level;
  band.lower.resize(grid.size());
  band.mean.resize(grid.size());
  band.upper.resize(grid.size());
  for (Eigen::Index g = 0; g < grid.size(); ++g) {
    band.mean(g) = values.col(g).mean();
    band.lower(g) = interpolated_quantile(values.col(g), tail);
    band.upper(g) = interpolated_quantile(values.col(g), 1.0 - tail);
  }
  return band;
}

double coverage(const CredibleBand& band, const std::function<double(double)>& truth) {
  Eigen::Index hits = 0;
  for (Eigen::Index g = 0; g < band.grid.size(); ++g) {
    const double v = truth(band.grid(g));
    if (band.lower(g) <= v && v <= band.upper(g)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(band.grid.size());
}

namespace {

double constant_loglik(const Eigen::VectorXd& x, const Eigen::MatrixXd& lags, double mu,
                       const Eigen::VectorXd& a) {
  Eigen::VectorXd lambda = Eigen::VectorXd::Constant(x.size(), mu);
  if (a.size() > 0) lambda += lags * a;
  double total = 0.0;
  for (Eigen::Index t = 0; t < x.size(); ++t)
    total += -lambda(t) + (x(t) > 0.0 ? x(t) * std::log(lambda(t)) : 0.0);
  return total;
}

void project_constants(double& mu, Eigen::VectorXd& a) {
  mu = std::max(mu, 1e-8);
  a = a.cwiseMax(0.0);
  const double total = a.sum();
  if (total >= 1.0 - 1e-9) a *= (1.0 - 1e-6) / total;
}

}  // namespace

BaselineFit fit_constant_baseline(const CountSeries& series, int p) {
  if (p < 0) throw std::invalid_argument("fit_constant_baseline: p must be >= 0");
  if (series.length() < p + 2)
    throw std::invalid_argument("fit_constant_baseline: series too short for lag order " +
                                std::to_string(p));
  const Eigen::VectorXd xs = series.as_real();
  const Eigen::Index n = series.length() - p;
  const Eigen::VectorXd x = xs.tail(n);
  Eigen::MatrixXd lags(n, p);
  for (int i = 1; i <= p; ++i) lags.col(i - 1) = xs.segment(p - i, n);

  BaselineFit fit;
  fit.a = Eigen::VectorXd::Zero(p);
  if (p == 0) {  // closed-form Poisson maximum likelihood
    fit.mu = x.mean();
    fit.converged = true;
    fit.amse = (x.array() - fit.mu).square().mean();
    return fit;
  }

  double mu = std::max(x.mean() / 2.0, 0.1);
  Eigen::VectorXd a = Eigen::VectorXd::Constant(p, 0.4 / p);
  double value = constant_loglik(x, lags, mu, a);
  double step = 1.0 / static_cast<double>(n);
  constexpr int kMaxIter = 5000;
  bool converged = false;
  int it = 0;
  while (it < kMaxIter && !converged) {
    ++it;
    Eigen::VectorXd lambda = Eigen::VectorXd::Constant(n, mu) + lags * a;
    Eigen::VectorXd r = x.cwiseQuotient(lambda).array() - 1.0;
    const double dmu = r.sum();
    Eigen::VectorXd da = lags.transpose() * r;

    bool moved = false;
    for (int half = 0; half < 60; ++half) {
      double mu_try = mu + step * dmu;
      Eigen::VectorXd a_try = a + step * da;
      project_constants(mu_try, a_try);
      const double value_try = constant_loglik(x, lags, mu_try, a_try);
      if (value_try > value) {
        if (value_try - value <= 1e-12 * (1.0 + std::abs(value))) converged = true;
        mu = mu_try;
        a = a_try;
        value = value_try;
        step *= 2.0;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) {  // no uphill step at any scale: at a (constrained) maximum
      converged = true;
      break;
    }
  }

  fit.mu = mu;
  fit.a = a;
  fit.converged = converged;
  fit.iterations = it;
  Eigen::VectorXd lambda = Eigen::VectorXd::Constant(n, mu) + lags * a;
  fit.amse = (x - lambda).array().square().mean();
  return fit;
}

}  // namespace tvb
