#pragma once

// Curve bundles for the standard plots: the sine-kernel autocorrelation and
// diffraction densities for beta = 1, 2, 4 and the Ginibre density, each as
// GridFunction CSV plus a Vega-Lite spec that reads them.

#include <filesystem>
#include <vector>

#include "difflab/core.hpp"

namespace difflab {

/// r in [0, 5], 501 points.
Grid figure_autocorrelation_grid();
/// k in [-3, 3], 1200 points; no grid point falls on 0 or +-1.
Grid figure_diffraction_grid();
/// t in [0, 3], 301 points.
Grid figure_ginibre_grid();

/// Writes the bundle into out_dir (created if needed); returns the files
/// written in a fixed order.
std::vector<std::filesystem::path> reproduce_figures(const std::filesystem::path& out_dir);

}  // namespace difflab
