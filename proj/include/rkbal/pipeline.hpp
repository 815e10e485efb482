#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rkbal/reduced.hpp"

namespace rkbal {

/// Input signal plus the sampling grid of a training or evaluation run.
struct RunSpec {
  std::string input;
  int samples = 0;
  double horizon = 5.0;
};

/// Everything a pipeline run needs. Defaults reproduce the reference
/// experiment: poly:3 balancing on 800 samples over [0, 5] s, square-wave
/// training inputs, gauss:auto output map, and the mixed sine/square
/// evaluation input.
struct PipelineConfig {
  std::string system = "2d";  // "2d", "7d", "2d_reference" or "linear"
  std::optional<Mat> A, B, C;

  std::string kernel = "poly:3";
  std::string dyn_kernel = "poly:3";
  std::string out_kernel = "gauss:auto";

  SimSettings sampling{5.0, 800, 1e-3};
  std::string order = "auto:10";
  std::string jacobian = "taylor";

  RunSpec train_dynamics{"square:10:1", 1000, 5.0};
  RunSpec train_output{"square:10:2", 700, 5.0};
  RunSpec evaluation{"test", 1000, 5.0};

  bool output_bias = false;
  std::string dyn_targets = "true";  // or "finite_difference"
  std::vector<double> lambda_grid;   // empty: default grid
  std::uint64_t seed = 0;
};

/// Parses a JSON document; absent fields keep their defaults. Throws
/// ConfigError naming the offending field.
PipelineConfig config_from_json(const std::string& text);
std::string config_to_json(const PipelineConfig& config);

ControlSystem make_system(const PipelineConfig& config);
OrderPolicy parse_order(const std::string& text);

/// Settings actually used for a run: the step shrinks until it divides T/N.
SimSettings effective_settings(double horizon, int samples, double max_step);

struct ReduceReport {
  HankelSpectrum spectrum;
  int q = 0;
  LoocvResult dyn_cv;
  LoocvResult out_cv;
};

HankelSpectrum run_spectrum(const PipelineConfig& config);

/// Writes "index,sigma_Koc,sigma_KocT_Koc" for the first min(100, rank) values.
void write_spectrum_csv(std::ostream& os, const HankelSpectrum& spectrum);

ReducedModel run_reduce(const PipelineConfig& config, ReduceReport* report = nullptr);

struct CompareResult {
  Trajectory full;
  Trajectory reduced;
  double rmse = 0.0;
  double peak = 0.0;
  double relative_rmse = 0.0;
};

/// RMSE over all samples and output channels, peak |y_full|, and their ratio.
CompareResult output_error(const Trajectory& full, const Trajectory& approx);

/// Full system and reduced model under the evaluation input from x0 = 0.
CompareResult run_compare(const ReducedModel& model, const PipelineConfig& config);

/// "t,y_full...,y_reduced..." rows.
void write_compare_csv(std::ostream& os, const CompareResult& result);

/// Full-order trajectory under the evaluation input from x0 = 0.
Trajectory run_simulate(const PipelineConfig& config);

std::string model_to_json(const ReducedModel& model);
ReducedModel model_from_json(const std::string& text);

struct OracleCheck {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct OracleReport {
  std::vector<OracleCheck> checks;
  bool all_passed() const;
};

/// Random stable LTI system with eigenvalue real parts <= -0.5.
LinearSystem random_stable_lti(int n, int m, int p, std::uint64_t seed);

/// Linear-kernel equivalence checks against classical empirical balancing and
/// covariance PCA. Uses the configured linear system, or a random stable
/// 3-state system drawn from `config.seed` when none is configured.
OracleReport run_oracle(const PipelineConfig& config);

std::string oracle_report_json(const OracleReport& report);

}  // namespace rkbal
