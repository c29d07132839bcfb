#pragma once

// Experiment configuration.
//
// Text form: "[section]" headers followed by "key = value" lines, where every
// value is a JSON literal (number, string, bool, array). '#' starts a comment.
// Sections: model, waiting (renewal only), estimator, verify. A document that
// starts with '{' is read as JSON with the same nesting.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "difflab/estimators.hpp"
#include "difflab/samplers.hpp"
#include "difflab/theory.hpp"
#include "difflab/verify.hpp"

namespace difflab {

struct EstimatorConfig {
  Stat stat = Stat::Diffraction;
  /// Wavenumber grid for diffraction runs.
  Grid grid = Grid::make(0.1, 5.0, kDefaultGridPoints);
  /// Histogram range and bin count for pair-correlation runs.
  double r_max = 5.0;
  std::size_t bins = kDefaultBins;
  PeriodogramOptions periodogram;
};

struct VerifyConfig {
  int replicas = 20;
  std::uint64_t seed = 12345;
  /// Defaults depend on the model (see default_tolerance).
  std::optional<double> tol_sup;
  double z_cap = 4.0;
  /// Replaces the model's default exclusion bands when present.
  std::optional<std::vector<Band>> exclude;
  std::optional<Band> range;
  /// 0 means DIFFLAB_THREADS or the hardware concurrency.
  int threads = 0;
  /// Directory for replica CSVs, the averaged estimate and report.json.
  std::string out_dir;
};

struct ExperimentConfig {
  ModelSpec model = model::Poisson{};
  std::optional<Window> window;
  EstimatorConfig estimator;
  VerifyConfig verify;
};

/// Throws ErrorCode::Config naming the offending field.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Sectioned text; parse_config(serialise_config(c)) reproduces c.
std::string serialise_config(const ExperimentConfig& config);
/// Same content as nested JSON.
std::string config_json(const ExperimentConfig& config);

/// Model description as JSON, e.g. {"name": "dyson", "beta": 2, "n": 2048}.
/// Renewal laws go under "waiting" with the [waiting] keys.
ModelSpec parse_model_json(std::string_view json);
std::string model_json(const ModelSpec& spec);

/// "exponential", "gamma 2", "uniform 0.5 1.5", "discrete 1/2:1/2 3/2:1/2".
WaitingDistribution parse_waiting(std::string_view text);
std::string describe_waiting(const WaitingDistribution& mu);

}  // namespace difflab
