#include <exception>
#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "tvb/commands.hpp"
#include "tvb/csv_io.hpp"

namespace {

// Fill options from a key=value file without overriding anything given on the
// command line. CLI11's own config-file hook only fires on the top-level app,
// so subcommands apply their config files through this instead.
void apply_config_file(CLI::App* cmd, const std::string& path) {
  for (const auto& [key, value] : tvb::read_key_values(path)) {
    if (key == "config") continue;
    CLI::Option* opt = nullptr;
    try {
      opt = cmd->get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw std::runtime_error(path + ": unknown option '" + key + "'");
    }
    if (opt->count() == 0) {
      opt->add_result(value);
      opt->run_callback();
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-varying Bayesian count models: simulate, fit, evaluate"};
  app.require_subcommand(1);

  tvb::SimulateOptions sim;
  CLI::App* simulate = app.add_subcommand("simulate", "Generate a synthetic count series");
  simulate->add_option("--case", sim.scenario, "Scenario: AR1, AR2, or INGARCH11")
      ->capture_default_str();
  simulate->add_option("--T", sim.T, "Horizon; the series has T+1 observations")
      ->capture_default_str();
  simulate->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
  simulate->add_option("--lambda-init", sim.lambda_init,
                       "Initial intensity (default: stationary value at x=0)");
  simulate->add_option("--out", sim.out, "Output CSV path (overrides --output-dir naming)");
  simulate->add_option("--output-dir", sim.output_dir, "Directory for derived output names")
      ->envname("TVBCOUNT_OUTPUT_DIR")
      ->capture_default_str();

  tvb::FitOptions fit;
  CLI::App* fitcmd =
      app.add_subcommand("fit", "Fit a model by HMC; write chain, bands, and reports");
  std::string fit_config;
  fitcmd->add_option("--config", fit_config, "Read options from a key=value file (flags win)");
  fitcmd->add_option("--model", fit.model, "tvbarc or tvbingarch")->capture_default_str();
  fitcmd->add_option("--p", fit.p, "Count-lag order")->capture_default_str();
  fitcmd->add_option("--q", fit.q, "Intensity-lag order (tvbingarch only)")
      ->capture_default_str();
  fitcmd->add_option("--num-basis", fit.num_basis, "Number of B-spline basis functions")
      ->capture_default_str();
  fitcmd->add_option("--degree", fit.degree, "B-spline degree")->capture_default_str();
  fitcmd->add_option("--c1", fit.c1, "Prior variance for delta")->capture_default_str();
  fitcmd->add_option("--c2", fit.c2, "Prior variance for beta")->capture_default_str();
  fitcmd->add_option("--d1", fit.d1, "Inverse-Gamma shape/scale for lambda0")
      ->capture_default_str();
  fitcmd->add_option("--iterations", fit.hmc.iterations, "Total MCMC iterations")
      ->capture_default_str();
  fitcmd->add_option("--burn-in", fit.hmc.burn_in, "Iterations discarded before inference")
      ->capture_default_str();
  fitcmd->add_option("--leapfrog-steps", fit.hmc.leapfrog_steps, "Leapfrog steps per proposal")
      ->capture_default_str();
  fitcmd->add_option("--step-size", fit.hmc.initial_step_size, "Initial leapfrog step size")
      ->capture_default_str();
  fitcmd->add_option("--adapt-interval", fit.hmc.adapt_interval,
                     "Iterations between step-size adjustments during burn-in")
      ->capture_default_str();
  fitcmd->add_option("--seed", fit.hmc.seed, "RNG seed")->capture_default_str();
  fitcmd->add_option("--level", fit.level, "Credible band level")->capture_default_str();
  fitcmd->add_option("--input", fit.input, "Count series CSV (t,x or date,count)");
  fitcmd->add_option("--output-dir", fit.output_dir, "Directory for output files")
      ->envname("TVBCOUNT_OUTPUT_DIR")
      ->capture_default_str();
  fitcmd->add_option("--prefix", fit.prefix, "Output file name prefix")->capture_default_str();

  tvb::EvaluateOptions ev;
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Recompute AMSE (and coverage) from a stored chain");
  evaluate->add_option("--model", ev.model, "tvbarc or tvbingarch")->capture_default_str();
  evaluate->add_option("--p", ev.p, "Count-lag order")->capture_default_str();
  evaluate->add_option("--q", ev.q, "Intensity-lag order (tvbingarch only)")
      ->capture_default_str();
  evaluate->add_option("--num-basis", ev.num_basis, "Number of B-spline basis functions")
      ->capture_default_str();
  evaluate->add_option("--degree", ev.degree, "B-spline degree")->capture_default_str();
  evaluate->add_option("--input", ev.input, "Count series CSV the chain was fitted to");
  evaluate->add_option("--chain", ev.chain, "Chain CSV written by fit");
  evaluate->add_option("--case", ev.scenario,
                       "Builtin scenario; adds coverage of the true functions");
  evaluate->add_option("--level", ev.level, "Credible band level")->capture_default_str();
  evaluate->add_option("--out", ev.out, "Also write the AMSE report to this path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) tvb::cmd_simulate(sim);
    if (fitcmd->parsed()) {
      if (!fit_config.empty()) apply_config_file(fitcmd, fit_config);
      tvb::cmd_fit(fit);
    }
    if (evaluate->parsed()) tvb::cmd_evaluate(ev);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
