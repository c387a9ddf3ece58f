#include "tvb/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "tvb/csv_io.hpp"
#include "tvb/fit.hpp"
#include "tvb/simulator.hpp"

namespace tvb {

namespace {

void require_valid(const std::vector<std::string>& violations) {
  if (violations.empty()) return;
  std::string joined = "invalid configuration: ";
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i > 0) joined += "; ";
    joined += violations[i];
  }
  throw std::runtime_error(joined);
}

void check_hmc(const HmcConfig& hmc, std::vector<std::string>& out) {
  if (hmc.iterations < 1) out.push_back("iterations must be >= 1");
  if (hmc.burn_in < 0 || hmc.burn_in >= hmc.iterations)
    out.push_back("burn-in must lie in [0, iterations)");
  if (hmc.leapfrog_steps < 1) out.push_back("leapfrog-steps must be >= 1");
  if (!(hmc.initial_step_size > 0.0)) out.push_back("step-size must be positive");
  if (hmc.adapt_interval < 1) out.push_back("adapt-interval must be >= 1");
}

void check_model(const std::string& model, int p, int q, int num_basis, int degree,
                 std::vector<std::string>& out) {
  const bool known = model == "tvbarc" || model == "tvbingarch";
  if (!known) out.push_back("model must be tvbarc or tvbingarch, got '" + model + "'");
  if (p < 0) out.push_back("p must be >= 0");
  if (q < 0) out.push_back("q must be >= 0");
  if (known && model == "tvbarc" && q != 0) out.push_back("q must be 0 for model tvbarc");
  if (known && model == "tvbingarch" && q < 1) out.push_back("q must be >= 1 for model tvbingarch");
  if (num_basis < 4) out.push_back("num-basis must be >= 4");
  if (degree < 0) out.push_back("degree must be >= 0");
  if (degree >= 0 && num_basis >= 4 && num_basis < degree + 1)
    out.push_back("num-basis must be >= degree + 1");
}

std::string joined_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::string format_real(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

// Everything cmd_fit needs that depends on which model was requested.
struct FitBundle {
  std::unique_ptr<Target> target;
  const DrawEvaluator* evaluator = nullptr;
  std::vector<int> exp_columns;
  int t_start = 1;
};

FitBundle make_bundle(const std::string& model, const CountSeries& series,
                      const SplineBasis& basis, const FitOptions& options) {
  FitBundle bundle;
  if (model == "tvbarc") {
    Hyper hyper{options.c1, options.c2};
    auto target = std::make_unique<TvbarcTarget>(TvbarcDesign(series, basis, options.p), hyper);
    bundle.evaluator = target.get();
    bundle.exp_columns = target->natural_exp_columns();
    bundle.t_start = options.p;
    bundle.target = std::move(target);
  } else {
    HyperIngarch hyper{options.c1, options.c2, options.d1};
    auto target = std::make_unique<TvbingarchTarget>(
        TvbingarchDesign(series, basis, options.p, options.q), hyper);
    bundle.evaluator = target.get();
    bundle.exp_columns = target->natural_exp_columns();
    bundle.t_start = 1;
    bundle.target = std::move(target);
  }
  return bundle;
}

}  // namespace

std::vector<std::string> validate(const SimulateOptions& options) {
  std::vector<std::string> out;
  if (options.scenario != "AR1" && options.scenario != "AR2" && options.scenario != "INGARCH11")
    out.push_back("case must be AR1, AR2, or INGARCH11, got '" + options.scenario + "'");
  if (options.T < 10) out.push_back("T must be >= 10");
  return out;
}

std::vector<std::string> validate(const FitOptions& options) {
  std::vector<std::string> out;
  check_model(options.model, options.p, options.q, options.num_basis, options.degree, out);
  check_hmc(options.hmc, out);
  if (!(options.level > 0.0 && options.level < 1.0)) out.push_back("level must lie in (0,1)");
  if (!(options.c1 > 0.0)) out.push_back("c1 must be positive");
  if (!(options.c2 > 0.0)) out.push_back("c2 must be positive");
  if (options.model == "tvbingarch" && !(options.d1 > 0.0)) out.push_back("d1 must be positive");
  if (options.input.empty()) out.push_back("input path is required");
  if (options.prefix.empty()) out.push_back("prefix must not be empty");
  return out;
}

std::vector<std::string> validate(const EvaluateOptions& options) {
  std::vector<std::string> out;
  check_model(options.model, options.p, options.q, options.num_basis, options.degree, out);
  if (!(options.level > 0.0 && options.level < 1.0)) out.push_back("level must lie in (0,1)");
  if (options.input.empty()) out.push_back("input path is required");
  if (options.chain.empty()) out.push_back("chain path is required");
  if (!options.scenario.empty() && options.scenario != "AR1" && options.scenario != "AR2" &&
      options.scenario != "INGARCH11")
    out.push_back("case must be AR1, AR2, or INGARCH11, got '" + options.scenario + "'");
  return out;
}

void cmd_simulate(const SimulateOptions& options) {
  require_valid(validate(options));
  const TruthFunctions truth = builtin_truth(options.scenario);
  std::mt19937_64 rng(options.seed);
  const double init =
      options.lambda_init > 0.0 ? options.lambda_init : default_lambda_init(truth);
  const CountSeries series = simulate(truth, options.T, rng, init);

  std::string path = options.out;
  if (path.empty())
    path = joined_path(options.output_dir, "sim_" + options.scenario + "_T" +
                                               std::to_string(options.T) + "_seed" +
                                               std::to_string(options.seed) + ".csv");
  std::filesystem::create_directories(std::filesystem::path(path).parent_path().empty()
                                          ? "."
                                          : std::filesystem::path(path).parent_path().string());
  write_count_csv(path, series);
  std::cout << "wrote " << path << "\n";
}

void cmd_fit(const FitOptions& options) {
  require_valid(validate(options));
  const CountSeries series = read_count_csv(options.input);
  const SplineBasis basis = build_basis(options.num_basis, options.degree);
  FitBundle bundle = make_bundle(options.model, series, basis, options);

  const Chain chain = run_chain(*bundle.target, options.hmc);
  std::filesystem::create_directories(options.output_dir);

  const std::string chain_path = joined_path(options.output_dir, options.prefix + "_chain.csv");
  write_chain_csv(chain_path, chain, bundle.exp_columns);

  const Eigen::VectorXd grid =
      observation_grid(bundle.t_start, static_cast<int>(series.horizon()));
  std::vector<std::string> band_paths;
  for (int f = 0; f < bundle.evaluator->n_functions(); ++f) {
    const CredibleBand band = credible_band(chain, *bundle.evaluator, f, grid, options.level);
    const std::string band_path = joined_path(
        options.output_dir,
        options.prefix + "_band_" + bundle.evaluator->function_name(f) + ".csv");
    write_band_csv(band_path, band);
    band_paths.push_back(band_path);
  }

  const double err = amse(chain, *bundle.evaluator);
  const std::string amse_path = joined_path(options.output_dir, options.prefix + "_amse.txt");
  write_amse_report(amse_path, err);

  // The manifest doubles as a config file: plain keys mirror the fit flags,
  // '#' lines carry run results that the config reader skips.
  const std::string manifest_path =
      joined_path(options.output_dir, options.prefix + "_manifest.txt");
  std::ofstream manifest(manifest_path);
  if (!manifest) throw std::runtime_error("cannot open " + manifest_path + " for writing");
  manifest << "model=" << options.model << "\n"
           << "input=" << options.input << "\n"
           << "output-dir=" << options.output_dir << "\n"
           << "prefix=" << options.prefix << "\n"
           << "p=" << options.p << "\n"
           << "q=" << options.q << "\n"
           << "num-basis=" << options.num_basis << "\n"
           << "degree=" << options.degree << "\n"
           << "c1=" << format_real(options.c1) << "\n"
           << "c2=" << format_real(options.c2) << "\n"
           << "d1=" << format_real(options.d1) << "\n"
           << "iterations=" << options.hmc.iterations << "\n"
           << "burn-in=" << options.hmc.burn_in << "\n"
           << "leapfrog-steps=" << options.hmc.leapfrog_steps << "\n"
           << "step-size=" << format_real(options.hmc.initial_step_size) << "\n"
           << "adapt-interval=" << options.hmc.adapt_interval << "\n"
           << "seed=" << options.hmc.seed << "\n"
           << "level=" << format_real(options.level) << "\n";
  manifest << "# post_draws=" << chain.n_post() << "\n";
  for (std::size_t b = 0; b < chain.blocks.size(); ++b)
    manifest << "# accept_" << chain.blocks[b].name << "="
             << format_real(chain.post_acceptance_rate(b)) << "\n";
  manifest << "# amse=" << format_real(err) << "\n";
  if (!manifest) throw std::runtime_error("failed while writing " + manifest_path);
  manifest.close();

  std::cout << "wrote " << chain_path << "\n";
  for (const std::string& path : band_paths) std::cout << "wrote " << path << "\n";
  std::cout << "wrote " << amse_path << "\n"
            << "wrote " << manifest_path << "\n"
            << "amse=" << format_real(err) << "\n";
  for (std::size_t b = 0; b < chain.blocks.size(); ++b)
    std::cout << "accept_" << chain.blocks[b].name << "="
              << format_real(chain.post_acceptance_rate(b)) << "\n";
}

void cmd_evaluate(const EvaluateOptions& options) {
  require_valid(validate(options));
  const CountSeries series = read_count_csv(options.input);
  const SplineBasis basis = build_basis(options.num_basis, options.degree);
  FitOptions shim;
  shim.model = options.model;
  shim.p = options.p;
  shim.q = options.q;
  FitBundle bundle = make_bundle(options.model, series, basis, shim);

  StoredChain stored = read_chain_csv(options.chain);
  const std::vector<std::string> expected = bundle.target->coordinate_names();
  if (stored.names != expected)
    throw std::runtime_error(options.chain +
                             ": chain columns do not match the requested model layout");
  to_sampler_scale(stored, bundle.exp_columns);
  if (stored.burn_in >= stored.draws.rows())
    throw std::runtime_error(options.chain + ": no post-burn-in draws");

  Chain chain;
  chain.draws = std::move(stored.draws);
  chain.burn_in = stored.burn_in;
  chain.coordinate_names = std::move(stored.names);

  const double err = amse(chain, *bundle.evaluator);
  std::cout << "amse=" << format_real(err) << "\n";

  if (!options.scenario.empty()) {
    const TruthFunctions truth = builtin_truth(options.scenario);
    if (truth.p() != options.p || truth.q() != options.q)
      throw std::runtime_error("scenario " + options.scenario + " has orders (p,q)=(" +
                               std::to_string(truth.p()) + "," + std::to_string(truth.q()) +
                               "), fit uses (" + std::to_string(options.p) + "," +
                               std::to_string(options.q) + ")");
    const Eigen::VectorXd grid =
        observation_grid(bundle.t_start, static_cast<int>(series.horizon()));
    for (int f = 0; f < bundle.evaluator->n_functions(); ++f) {
      const CredibleBand band = credible_band(chain, *bundle.evaluator, f, grid, options.level);
      std::function<double(double)> fn;
      if (f == 0)
        fn = [&truth](double x) { return truth.mu(x); };
      else if (f <= options.p)
        fn = [&truth, f](double x) { return truth.a(f - 1, x); };
      else
        fn = [&truth, f, &options](double x) { return truth.b(f - 1 - options.p, x); };
      std::cout << "coverage_" << bundle.evaluator->function_name(f) << "="
                << format_real(coverage(band, fn)) << "\n";
    }
  }
  if (!options.out.empty()) write_amse_report(options.out, err);
}

}  // namespace tvb
