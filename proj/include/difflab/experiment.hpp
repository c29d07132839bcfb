#pragma once

// Replicated sample -> estimate -> average -> compare pipeline.

#include <vector>

#include "difflab/config.hpp"
#include "difflab/io.hpp"

namespace difflab {

/// Applies the configured estimator to one realisation. Weighted sets use
/// their weights in the periodogram and only their positions for pair
/// correlation.
GridFunction estimate(const AnyPointSet& p, const EstimatorConfig& config);

/// |k| < 8 / diameter (unless the model has no delta_0 atom), +-0.05 around
/// renewal lattice atoms, (0.9, 1.1) for beta = 4 diffraction; mirrored for
/// negative abscissae.
std::vector<Band> default_exclusions(const ExperimentConfig& config);
/// 0.07 for Ginibre, 0.05 otherwise.
double default_tolerance(const ModelSpec& spec);
/// Reference curve the estimate is compared with.
std::function<double(double)> theory_curve(const ExperimentConfig& config);
CompareOptions compare_options(const ExperimentConfig& config);

/// Worker count: `requested` if positive, else the hardware concurrency,
/// capped by DIFFLAB_THREADS when set.
int resolve_threads(int requested);

/// "dyson beta=2 n=2048 keep=0.1" style descriptor.
std::string describe_model(const ModelSpec& spec);

struct ExperimentResult {
  ComparisonReport report;
  GridFunction estimate;
  std::vector<GridFunction> replicas;
};

/// Deterministic in the master seed: replicas run in parallel and are merged
/// in ascending replica order. Writes points_rNNN.csv, estimate_rNNN.csv,
/// estimate.csv, theory.csv, config.toml and report.json when out_dir is set.
ExperimentResult run_experiment_full(const ExperimentConfig& config);
ComparisonReport run_experiment(const ExperimentConfig& config);

}  // namespace difflab
