#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tvb/hmc.hpp"

namespace tvb {

struct SimulateOptions {
  std::string scenario = "AR1";
  int T = 500;
  std::uint64_t seed = 1;
  double lambda_init = -1.0;  // <= 0 means: use the scenario's stationary default
  std::string out;            // explicit file path; empty derives one from output_dir
  std::string output_dir = ".";
};

struct FitOptions {
  std::string model = "tvbarc";  // tvbarc | tvbingarch
  int p = 1;
  int q = 0;
  int num_basis = 6;
  int degree = 3;
  double c1 = 100.0;
  double c2 = 100.0;
  double d1 = 0.1;
  HmcConfig hmc;
  double level = 0.95;
  std::string input;
  std::string output_dir = ".";
  std::string prefix = "fit";
};

struct EvaluateOptions {
  std::string model = "tvbarc";
  int p = 1;
  int q = 0;
  int num_basis = 6;
  int degree = 3;
  std::string input;
  std::string chain;
  std::string scenario;  // optional: builtin truth for coverage reporting
  double level = 0.95;
  std::string out;  // optional: also write the amse report here
};

/// Every violated constraint, one message each; empty means valid.
std::vector<std::string> validate(const SimulateOptions& options);
std::vector<std::string> validate(const FitOptions& options);
std::vector<std::string> validate(const EvaluateOptions& options);

/// Run a subcommand. Throws std::runtime_error with a one-line message on any
/// failure (validation errors list every violation, separated by "; ").
void cmd_simulate(const SimulateOptions& options);
void cmd_fit(const FitOptions& options);
void cmd_evaluate(const EvaluateOptions& options);

}  // namespace tvb
